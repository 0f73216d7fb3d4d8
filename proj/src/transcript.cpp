#include "qcomm/transcript.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "qcomm/quantum.hpp"

namespace qcomm {

std::string_view to_string(Player p) { return p == Player::Alice ? "alice" : "bob"; }

std::size_t index_width(std::size_t n) {
    if (n <= 1) {
        return 0;
    }
    return static_cast<std::size_t>(std::bit_width(n - 1));
}

void BitWriter::put(std::uint64_t value, std::size_t width) {
    if (width < 64 && (value >> width) != 0) {
        throw ProtocolError("BitWriter: value " + std::to_string(value) + " does not fit in " +
                            std::to_string(width) + " bits");
    }
    for (std::size_t i = width; i-- > 0;) {
        bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
    }
}

void BitWriter::pad_to(std::size_t length) {
    if (bits_.size() > length) {
        throw ProtocolError("BitWriter: message of " + std::to_string(bits_.size()) +
                            " bits exceeds its declared length " + std::to_string(length));
    }
    bits_.resize(length, 0);
}

std::uint64_t BitReader::get(std::size_t width) {
    if (width > remaining()) {
        throw ProtocolError("BitReader: read past end of message");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
        v = (v << 1) | bits_[pos_++];
    }
    return v;
}

Transcript::Transcript(Player first_sender, std::vector<std::size_t> declared_lengths)
    : first_(first_sender), declared_(std::move(declared_lengths)) {}

Player Transcript::next_sender() const { return messages_.size() % 2 == 0 ? first_ : other(first_); }

const Message &Transcript::send(Player sender, Bits bits) {
    if (complete()) {
        throw ProtocolError("transcript: all " + std::to_string(declared_.size()) + " declared rounds already used");
    }
    if (sender != next_sender()) {
        throw ProtocolError("transcript: " + std::string(to_string(sender)) + " sent out of turn in round " +
                            std::to_string(messages_.size() + 1));
    }
    std::size_t round = messages_.size() + 1;
    if (bits.size() != declared_[round - 1]) {
        throw ProtocolError("transcript: round " + std::to_string(round) + " declared " +
                            std::to_string(declared_[round - 1]) + " bits, got " + std::to_string(bits.size()));
    }
    messages_.push_back(Message{round, sender, std::move(bits)});
    return messages_.back();
}

std::size_t Transcript::total_bits() const {
    std::size_t total = 0;
    for (const auto &m : messages_) {
        total += m.bits.size();
    }
    return total;
}

std::uint64_t PublicCoins::next_u64() { return derive_seed(seed_, counter_++); }

std::uint64_t PublicCoins::uniform(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("PublicCoins::uniform: zero bound");
    }
    // Rejection sampling keeps the result exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next_u64();
    while (x >= limit) {
        x = next_u64();
    }
    return x % bound;
}

double PublicCoins::uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> PublicCoins::sample_without_replacement(std::size_t n, std::size_t count) {
    if (count > n) {
        throw std::invalid_argument("sample_without_replacement: count exceeds population");
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace qcomm

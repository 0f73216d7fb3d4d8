#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcomm {

enum class Player { Alice, Bob };

inline Player other(Player p) { return p == Player::Alice ? Player::Bob : Player::Alice; }
std::string_view to_string(Player p);

/// A transcript or schedule was used inconsistently with its declaration.
class ProtocolError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

using Bits = std::vector<std::uint8_t>;

/// ceil(log2 n); 0 for n <= 1.
std::size_t index_width(std::size_t n);

class BitWriter {
   public:
    /// Appends `width` bits of value, most significant first.
    void put(std::uint64_t value, std::size_t width);
    void put_bit(bool b) { bits_.push_back(b ? 1 : 0); }
    void pad_to(std::size_t length);
    std::size_t size() const { return bits_.size(); }
    Bits take() { return std::move(bits_); }

   private:
    Bits bits_;
};

class BitReader {
   public:
    explicit BitReader(const Bits &bits) : bits_(bits) {}
    std::uint64_t get(std::size_t width);
    std::size_t remaining() const { return bits_.size() - pos_; }

   private:
    const Bits &bits_;
    std::size_t pos_ = 0;
};

struct Message {
    std::size_t round = 0;  // 1-based
    Player sender = Player::Alice;
    Bits bits;
};

/// Ordered messages against a schedule of per-round lengths fixed before
/// execution. Senders alternate starting from `first_sender`.
class Transcript {
   public:
    Transcript(Player first_sender, std::vector<std::size_t> declared_lengths);

    /// Throws ProtocolError if the sender is out of turn, the schedule is
    /// exhausted or the length differs from the declaration.
    const Message &send(Player sender, Bits bits);

    Player first_sender() const { return first_; }
    Player next_sender() const;
    std::size_t rounds() const { return declared_.size(); }
    bool complete() const { return messages_.size() == declared_.size(); }
    const std::vector<Message> &messages() const { return messages_; }
    const std::vector<std::size_t> &declared_lengths() const { return declared_; }
    std::size_t total_bits() const;

   private:
    Player first_;
    std::vector<std::size_t> declared_;
    std::vector<Message> messages_;
};

/// Counter-based shared randomness: both players reading the same seed see
/// the same stream.
class PublicCoins {
   public:
    explicit PublicCoins(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t next_u64();
    /// Uniform in [0, bound).
    std::uint64_t uniform(std::uint64_t bound);
    double uniform_real();
    /// `count` distinct values of [0, n), ascending.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

   private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace qcomm

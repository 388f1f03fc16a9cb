#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace primex {

/// Binary prime-exponent vector encoding the information pedigree of a belief.
/// Entry t is 1 iff the prime with global index t divides the underlying
/// information code. GCD and LCM of codes reduce to element-wise min and max,
/// so big-integer products are never materialized.
class InformationCode {
 public:
  InformationCode() = default;
  /// Takes a vector of 0/1 flags; throws DimensionError on any other value.
  explicit InformationCode(std::vector<std::uint8_t> bits);

  static InformationCode zeros(std::size_t length);

  std::size_t length() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t t) const { return bits_[t]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  void set_bit(std::size_t t);
  /// Appends `count` zero entries (fresh, not-yet-used prime indices).
  void append_zeros(std::size_t count);
  /// Removes the first `count` entries (indices that left the sliding window).
  void drop_front(std::size_t count);

  friend bool operator==(const InformationCode&, const InformationCode&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Shared information between two pedigrees: element-wise minimum.
InformationCode ic_gcd(const InformationCode& a, const InformationCode& b);

/// Combined pedigree after fusion: element-wise maximum.
InformationCode ic_lcm(const InformationCode& a, const InformationCode& b);

/// Bits present at `from_j` but absent at `at_i` (element-wise positive part of
/// the difference). These are the entries a transmission from j would add at i.
InformationCode ic_increment(const InformationCode& from_j, const InformationCode& at_i);

/// Number of set bits; applied to an increment this scores the amount of fresh
/// information a neighbor offers.
std::size_t ic_score(const InformationCode& delta);

/// True iff `current` has at least one bit set that `reference` lacks.
bool has_new_bits(const InformationCode& current, const InformationCode& reference);

/// Multi-code fusion by alternating multiplication and division over all subset
/// GCDs, evaluated in small-integer exponent arithmetic: per entry, the signed
/// inclusion-exclusion sum of subset minima. For binary inputs this provably
/// collapses to the element-wise maximum over all codes; the operation exists
/// as a reference oracle for that identity, not as a hot-path primitive, and is
/// capped at `max_inputs` codes.
InformationCode ic_multi_fuse_alternating(std::span<const InformationCode> codes,
                                          std::size_t max_inputs = 8);

/// Result of advancing the global prime-index allocator to a new time step.
/// Every live code must first drop `dropped` front entries, then append
/// `appended` zeros; sensor rank s then owns position `position_by_rank[s]`
/// in the resulting layout.
struct TimeAllocation {
  int time = 0;
  std::size_t dropped = 0;
  std::size_t appended = 0;
  /// Global prime index assigned to each sensor rank at this time step.
  std::vector<std::size_t> global_index_by_rank;
  /// Position of each sensor's new bit within the live (windowed) layout.
  std::vector<std::size_t> position_by_rank;
};

/// Deterministic global layout of prime indices. Index 0 is reserved for the
/// shared prior; the measurement of sensor rank s at time k >= 1 owns global
/// index 1 + (k-1)*sensor_count + s. A finite window keeps only the most
/// recent `window_length` time steps (the prior counts as time 0 and leaves
/// the window under the same rule).
class PrimeIndexAllocator {
 public:
  static constexpr std::size_t kPriorIndex = 0;

  /// `window_length` empty means unbounded.
  PrimeIndexAllocator(int sensor_count, std::optional<int> window_length = std::nullopt);

  int sensor_count() const { return sensor_count_; }
  std::optional<int> window_length() const { return window_length_; }
  int current_time() const { return current_time_; }

  std::size_t global_index(int sensor_rank, int time) const;

  /// First time step still inside the window at time `k`.
  int window_start_time(int k) const;
  /// Global index of the first live position at time `k`.
  std::size_t base_index(int k) const;
  /// Total indices ever allocated by time `k`: 1 + k*sensor_count.
  std::size_t full_length(int k) const;
  /// Length of a live (windowed) code at time `k`.
  std::size_t code_length(int k) const;
  std::size_t code_length() const { return code_length(current_time_); }
  bool prior_in_window() const { return window_start_time(current_time_) == 0; }

  /// Advances to time step `k`, which must equal current_time()+1; throws
  /// SequencingError otherwise. Returns the index map and layout update that
  /// every live code must apply.
  TimeAllocation advance(int k);

 private:
  int sensor_count_;
  std::optional<int> window_length_;
  int current_time_ = 0;
};

/// Applies the sliding-window rule to a code held at the allocator's current
/// time. Accepts either a pre-truncation layout (base of the previous step,
/// fresh indices already appended) or an already-truncated one, in which case
/// the code is returned unchanged; any other length is a DimensionError.
/// With an unbounded window the input is always returned unchanged.
InformationCode window_truncate(const InformationCode& code, const PrimeIndexAllocator& allocator);

}  // namespace primex

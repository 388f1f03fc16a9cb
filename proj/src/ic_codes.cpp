#include "primex/ic_codes.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "primex/errors.hpp"

namespace primex {

namespace {

void require_equal_length(const InformationCode& a, const InformationCode& b) {
  if (a.length() != b.length()) {
    throw DimensionError("information code length mismatch: " + std::to_string(a.length()) +
                         " vs " + std::to_string(b.length()));
  }
}

}  // namespace

InformationCode::InformationCode(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::uint8_t b : bits_) {
    if (b > 1) {
      throw DimensionError("information code entries must be 0 or 1");
    }
  }
}

InformationCode InformationCode::zeros(std::size_t length) {
  InformationCode code;
  code.bits_.assign(length, 0);
  return code;
}

void InformationCode::set_bit(std::size_t t) {
  if (t >= bits_.size()) {
    throw DimensionError("bit index " + std::to_string(t) + " out of range for code of length " +
                         std::to_string(bits_.size()));
  }
  bits_[t] = 1;
}

void InformationCode::append_zeros(std::size_t count) {
  bits_.insert(bits_.end(), count, 0);
}

void InformationCode::drop_front(std::size_t count) {
  if (count > bits_.size()) {
    throw DimensionError("cannot drop more entries than the code holds");
  }
  bits_.erase(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(count));
}

InformationCode ic_gcd(const InformationCode& a, const InformationCode& b) {
  require_equal_length(a, b);
  std::vector<std::uint8_t> out(a.length());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = std::min(a[t], b[t]);
  }
  return InformationCode(std::move(out));
}

InformationCode ic_lcm(const InformationCode& a, const InformationCode& b) {
  require_equal_length(a, b);
  std::vector<std::uint8_t> out(a.length());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = std::max(a[t], b[t]);
  }
  return InformationCode(std::move(out));
}

InformationCode ic_increment(const InformationCode& from_j, const InformationCode& at_i) {
  require_equal_length(from_j, at_i);
  std::vector<std::uint8_t> out(from_j.length());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = (from_j[t] == 1 && at_i[t] == 0) ? 1 : 0;
  }
  return InformationCode(std::move(out));
}

std::size_t ic_score(const InformationCode& delta) {
  std::size_t count = 0;
  for (std::uint8_t b : delta.bits()) {
    count += b;
  }
  return count;
}

bool has_new_bits(const InformationCode& current, const InformationCode& reference) {
  require_equal_length(current, reference);
  for (std::size_t t = 0; t < current.length(); ++t) {
    if (current[t] == 1 && reference[t] == 0) {
      return true;
    }
  }
  return false;
}

InformationCode ic_multi_fuse_alternating(std::span<const InformationCode> codes,
                                          std::size_t max_inputs) {
  if (codes.empty()) {
    throw DimensionError("multi-code fusion requires at least one code");
  }
  if (codes.size() > max_inputs) {
    throw BoundError("multi-code fusion limited to " + std::to_string(max_inputs) +
                     " inputs, got " + std::to_string(codes.size()));
  }
  const std::size_t n = codes.size();
  const std::size_t len = codes[0].length();
  for (const auto& c : codes) {
    require_equal_length(codes[0], c);
  }

  // Per entry: sum over nonempty subsets J of (-1)^(|J|-1) * min over J.
  std::vector<int> exponent(len, 0);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
    for (std::size_t t = 0; t < len; ++t) {
      std::uint8_t subset_min = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (1u << j)) {
          subset_min = std::min(subset_min, codes[j][t]);
        }
      }
      exponent[t] += sign * subset_min;
    }
  }

  std::vector<std::uint8_t> out(len);
  for (std::size_t t = 0; t < len; ++t) {
    if (exponent[t] < 0 || exponent[t] > 1) {
      throw FusionError("alternating fusion produced a non-binary exponent");
    }
    out[t] = static_cast<std::uint8_t>(exponent[t]);
  }
  return InformationCode(std::move(out));
}

PrimeIndexAllocator::PrimeIndexAllocator(int sensor_count, std::optional<int> window_length)
    : sensor_count_(sensor_count), window_length_(window_length) {
  if (sensor_count <= 0) {
    throw ConfigError("allocator requires a positive sensor count");
  }
  if (window_length && *window_length < 1) {
    throw ConfigError("window length must be at least 1 time step");
  }
}

std::size_t PrimeIndexAllocator::global_index(int sensor_rank, int time) const {
  if (sensor_rank < 0 || sensor_rank >= sensor_count_ || time < 1) {
    throw DimensionError("sensor rank/time outside the allocated domain");
  }
  return 1 + static_cast<std::size_t>(time - 1) * static_cast<std::size_t>(sensor_count_) +
         static_cast<std::size_t>(sensor_rank);
}

int PrimeIndexAllocator::window_start_time(int k) const {
  if (!window_length_) {
    return 0;
  }
  return std::max(0, k - *window_length_ + 1);
}

std::size_t PrimeIndexAllocator::base_index(int k) const {
  const int start = window_start_time(k);
  if (start == 0) {
    return 0;
  }
  return global_index(0, start);
}

std::size_t PrimeIndexAllocator::full_length(int k) const {
  return 1 + static_cast<std::size_t>(k) * static_cast<std::size_t>(sensor_count_);
}

std::size_t PrimeIndexAllocator::code_length(int k) const {
  return full_length(k) - base_index(k);
}

TimeAllocation PrimeIndexAllocator::advance(int k) {
  if (k != current_time_ + 1) {
    throw SequencingError("allocator must advance to time " + std::to_string(current_time_ + 1) +
                          ", got " + std::to_string(k));
  }
  TimeAllocation allocation;
  allocation.time = k;
  allocation.appended = static_cast<std::size_t>(sensor_count_);
  allocation.dropped = base_index(k) - base_index(current_time_);
  allocation.global_index_by_rank.resize(static_cast<std::size_t>(sensor_count_));
  allocation.position_by_rank.resize(static_cast<std::size_t>(sensor_count_));
  const std::size_t base = base_index(k);
  for (int s = 0; s < sensor_count_; ++s) {
    const std::size_t global = global_index(s, k);
    allocation.global_index_by_rank[static_cast<std::size_t>(s)] = global;
    allocation.position_by_rank[static_cast<std::size_t>(s)] = global - base;
  }
  current_time_ = k;
  return allocation;
}

InformationCode window_truncate(const InformationCode& code,
                                const PrimeIndexAllocator& allocator) {
  if (!allocator.window_length()) {
    return code;
  }
  const int k = allocator.current_time();
  const std::size_t live = allocator.code_length(k);
  if (code.length() == live) {
    return code;
  }
  const std::size_t pre_truncate =
      allocator.full_length(k) - allocator.base_index(std::max(0, k - 1));
  if (code.length() != pre_truncate) {
    throw DimensionError("code length " + std::to_string(code.length()) +
                         " matches neither the live nor the pre-truncation layout at time " +
                         std::to_string(k));
  }
  InformationCode out = code;
  out.drop_front(code.length() - live);
  return out;
}

}  // namespace primex

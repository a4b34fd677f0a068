#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The offload Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <cstdint>

namespace offload {

// Canonical units: seconds, megabytes (10^6 bytes), megabits, cycles, cycles/second.
inline constexpr double kMegabitsPerMegabyte = 8.0;
inline constexpr double kBitsPerMegabyte     = 8.0e6;
inline constexpr double kSecondsPerHour      = 3600.0;

/// Money per hour to money per second.
template <typename Scalar>
constexpr Scalar per_second(Scalar per_hour)
{
  return per_hour / Scalar(kSecondsPerHour);
}

/// One task's end-to-end delay split into its parts. `transfer` is one-way;
/// the result travels back over the same backhaul, so it counts twice.
template <typename Scalar>
struct DelayBreakdownT
{
  Scalar transmission{0};
  Scalar transfer{0};
  Scalar computation{0};
  Scalar total{0};

  static DelayBreakdownT compose(Scalar transmission, Scalar transfer, Scalar computation)
  {
    return {transmission, transfer, computation, transmission + Scalar(2) * transfer + computation};
  }

  bool operator==(DelayBreakdownT const &) const = default;
};

using DelayBreakdown = DelayBreakdownT<double>;

// Bandwidth of an AP is split equally among its `users` connections.
template <typename Scalar>
Scalar transmission_seconds(Scalar data_mb, std::int64_t users, Scalar bandwidth_mbps)
{
  return data_mb * Scalar(kMegabitsPerMegabyte) * Scalar(users) / bandwidth_mbps;
}

// A server's cycles are split equally among its `tasks`.
template <typename Scalar>
Scalar computation_seconds(Scalar cycles, std::int64_t tasks, Scalar cycles_per_second)
{
  return cycles * Scalar(tasks) / cycles_per_second;
}

template <typename Scalar>
Scalar cycles_for(Scalar data_mb, Scalar cycles_per_bit)
{
  return data_mb * Scalar(kBitsPerMegabyte) * cycles_per_bit;
}

}  // namespace offload

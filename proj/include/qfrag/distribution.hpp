// Copyright 2026 The qfrag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace qfrag {

using Bits = std::uint64_t;

/// Probability distribution over measurement outcomes of `n_bits` wires.
///
/// Keys are packed outcomes: bit i of the key is the value read on wire i.
/// In text form the character at position i is wire i, so "10" means wire 0
/// read 1 and wire 1 read 0. Absent keys have probability zero.
class OutcomeDistribution {
 public:
  OutcomeDistribution() = default;
  explicit OutcomeDistribution(int n_bits);

  int n_bits() const { return n_bits_; }
  const std::map<Bits, double>& probs() const { return probs_; }

  double operator[](Bits key) const;
  double at(std::string_view bitstring) const;

  void set(Bits key, double p);
  void add(Bits key, double p);

  double total() const;
  std::size_t support_size() const { return probs_.size(); }

  /// Divides by the total; throws if the total is not positive.
  void normalize();

  /// Drops entries with |p| <= eps.
  void prune(double eps);

  static OutcomeDistribution from_counts(int n_bits, const std::map<Bits, std::uint64_t>& counts);

  friend bool operator==(const OutcomeDistribution&, const OutcomeDistribution&) = default;

 private:
  int n_bits_ = 0;
  std::map<Bits, double> probs_;
};

std::string bits_to_string(Bits bits, int n_bits);
Bits bits_from_string(std::string_view s);

/// Sum over the union of supports of |p - q| / 2.
double total_variation(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// CSV with a comment line documenting bit order, then `bitstring,probability`.
void write_distribution_csv(std::ostream& out, const OutcomeDistribution& dist);
OutcomeDistribution read_distribution_csv(std::istream& in);

}  // namespace qfrag

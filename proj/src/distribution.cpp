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

#include "qfrag/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "qfrag/error.hpp"

namespace qfrag {

OutcomeDistribution::OutcomeDistribution(int n_bits) : n_bits_(n_bits) {
  if (n_bits < 0 || n_bits > 64) throw SimulationError("distribution width must be in [0, 64]");
}

double OutcomeDistribution::operator[](Bits key) const {
  auto it = probs_.find(key);
  return it == probs_.end() ? 0.0 : it->second;
}

double OutcomeDistribution::at(std::string_view bitstring) const {
  if (static_cast<int>(bitstring.size()) != n_bits_) throw SimulationError("bitstring width mismatch");
  return (*this)[bits_from_string(bitstring)];
}

void OutcomeDistribution::set(Bits key, double p) {
  if (p == 0.0) {
    probs_.erase(key);
  } else {
    probs_[key] = p;
  }
}

void OutcomeDistribution::add(Bits key, double p) {
  if (p != 0.0) probs_[key] += p;
}

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (const auto& [k, p] : probs_) s += p;
  return s;
}

void OutcomeDistribution::normalize() {
  const double s = total();
  if (!(s > 0.0)) throw SimulationError("cannot normalize a distribution with non-positive total");
  for (auto& [k, p] : probs_) p /= s;
}

void OutcomeDistribution::prune(double eps) {
  std::erase_if(probs_, [eps](const auto& kv) { return std::abs(kv.second) <= eps; });
}

OutcomeDistribution OutcomeDistribution::from_counts(int n_bits, const std::map<Bits, std::uint64_t>& counts) {
  OutcomeDistribution d(n_bits);
  std::uint64_t shots = 0;
  for (const auto& [k, c] : counts) shots += c;
  if (shots == 0) throw SimulationError("no counts to normalize");
  for (const auto& [k, c] : counts) {
    if (c) d.probs_[k] = static_cast<double>(c) / static_cast<double>(shots);
  }
  return d;
}

std::string bits_to_string(Bits bits, int n_bits) {
  std::string s(static_cast<std::size_t>(n_bits), '0');
  for (int i = 0; i < n_bits; ++i) {
    if ((bits >> i) & 1U) s[i] = '1';
  }
  return s;
}

Bits bits_from_string(std::string_view s) {
  if (s.size() > 64) throw SimulationError("bitstring longer than 64 bits");
  Bits b = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      b |= Bits{1} << i;
    } else if (s[i] != '0') {
      throw SimulationError("invalid bitstring '" + std::string(s) + "'");
    }
  }
  return b;
}

double total_variation(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.n_bits() != q.n_bits()) throw SimulationError("total variation: width mismatch");
  double s = 0.0;
  for (const auto& [k, v] : p.probs()) s += std::abs(v - q[k]);
  for (const auto& [k, v] : q.probs()) {
    if (!p.probs().count(k)) s += std::abs(v);
  }
  return 0.5 * s;
}

void write_distribution_csv(std::ostream& out, const OutcomeDistribution& dist) {
  out << "# character i of bitstring is qubit q" << "[i] (leftmost is q[0]); " << dist.n_bits() << " bits\n";
  out << "bitstring,probability\n";
  char buf[64];
  for (const auto& [k, p] : dist.probs()) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << bits_to_string(k, dist.n_bits()) << ',' << buf << '\n';
  }
}

OutcomeDistribution read_distribution_csv(std::istream& in) {
  std::string line;
  int width = -1;
  OutcomeDistribution d;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "bitstring,probability") throw SimulationError("distribution CSV: missing header");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw SimulationError("distribution CSV: malformed row '" + line + "'");
    const std::string bits = line.substr(0, comma);
    if (width < 0) {
      width = static_cast<int>(bits.size());
      d = OutcomeDistribution(width);
    } else if (static_cast<int>(bits.size()) != width) {
      throw SimulationError("distribution CSV: inconsistent bitstring width");
    }
    d.add(bits_from_string(bits), std::stod(line.substr(comma + 1)));
  }
  if (!header) throw SimulationError("distribution CSV: missing header");
  return d;
}

}  // namespace qfrag

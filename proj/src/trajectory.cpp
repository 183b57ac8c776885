#include "cirw/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cirw/kernels.hpp"
#include "cirw/numeric.hpp"

namespace cirw {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t sample_poisson(std::mt19937_64& rng, double t) {
  // Inversion; split first so exp(-t) cannot underflow.
  std::uint64_t total = 0;
  while (t > 500.0) {
    total += sample_poisson(rng, 500.0);
    t -= 500.0;
  }
  double p = std::exp(-t);
  double cum = p;
  const double u = uniform01(rng);
  std::uint64_t k = 0;
  while (u > cum && p > 0.0) {
    ++k;
    p *= t / static_cast<double>(k);
    cum += p;
  }
  return total + k;
}

const Element& sample_letter(std::mt19937_64& rng,
                             const std::vector<std::pair<Element, double>>& entries,
                             double total) {
  const double u = uniform01(rng) * total;
  double cum = 0.0;
  for (const auto& [z, r] : entries) {
    cum += r;
    if (u < cum) return z;
  }
  return entries.back().first;
}

void require_unit_mass(const RateMeasure& mu, const char* who) {
  if (std::abs(mu.total_mass() - 1.0) > 1e-9) {
    throw std::domain_error(std::string(who) +
                            ": requires unit total rate; normalize the "
                            "measure");
  }
}

/// Rates evaluated as a product in ascending order, so equal rate multisets
/// give bit-identical products.
double canonical_weight(std::vector<double> rates) {
  std::sort(rates.begin(), rates.end());
  double w = 1.0;
  for (double r : rates) w *= r;
  return w;
}

}  // namespace

Element word_value(const GroupSpec& g, const Word& w) {
  Element v = g.identity();
  for (const Element& u : w.letters) v = g.multiply(v, u);
  return v;
}

Word sample_word(const GroupSpec& g, const RateMeasure& mu, std::size_t n,
                 std::uint64_t seed) {
  (void)g;
  std::mt19937_64 rng(seed);
  const auto& entries = mu.entries();
  const double total = mu.total_mass();
  Word w;
  w.letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.letters.push_back(sample_letter(rng, entries, total));
  }
  return w;
}

Word sample_path(const GroupSpec& g, const RateMeasure& mu, double t,
                 std::uint64_t seed) {
  require_unit_mass(mu, "sample_path");
  if (!(t >= 0.0)) throw std::invalid_argument("sample_path: t must be >= 0");
  std::mt19937_64 rng(seed);
  const std::uint64_t n = sample_poisson(rng, t);
  const auto& entries = mu.entries();
  const double total = mu.total_mass();
  Word w;
  w.letters.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    w.letters.push_back(sample_letter(rng, entries, total));
  }
  (void)g;
  return w;
}

std::uint64_t suffix_match_count(const GroupSpec& g, const Word& w,
                                 const Element& z) {
  std::uint64_t count = 0;
  Element suffix = g.identity();
  for (std::size_t j = w.size(); j-- > 0;) {
    if (w.letters[j] == g.conjugate(suffix, z)) ++count;
    suffix = g.multiply(w.letters[j], suffix);
  }
  return count;
}

Word insert_conjugated(const GroupSpec& g, const Word& w, std::size_t i,
                       const Element& z) {
  const std::size_t n = w.size();
  if (i < 1 || i > n + 1) {
    throw std::out_of_range("insert_conjugated: position out of range");
  }
  Element suffix = g.identity();
  for (std::size_t j = n; j-- > i - 1;) {
    suffix = g.multiply(w.letters[j], suffix);
  }
  Word out;
  out.letters.reserve(n + 1);
  out.letters.assign(w.letters.begin(),
                     w.letters.begin() + static_cast<std::ptrdiff_t>(i - 1));
  out.letters.push_back(g.conjugate(suffix, z));
  out.letters.insert(out.letters.end(),
                     w.letters.begin() + static_cast<std::ptrdiff_t>(i - 1),
                     w.letters.end());
  return out;
}

namespace {

/// Flattens a word into one hashable coordinate vector (letter arity is
/// fixed per group, so concatenation is unambiguous).
Element word_key(const Word& w) {
  Element key;
  for (const Element& u : w.letters) {
    key.insert(key.end(), u.begin(), u.end());
  }
  return key;
}

/// Odometer enumeration of supp^n in lexicographic index order.
class WordEnumerator {
 public:
  WordEnumerator(const std::vector<std::pair<Element, double>>& entries,
                 std::size_t n)
      : entries_(entries), digits_(n, 0), done_(false) {
    word_.letters.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      word_.letters.push_back(entries_[0].first);
    }
  }

  bool done() const { return done_; }
  const Word& word() const { return word_; }

  std::vector<double> rates() const {
    std::vector<double> r(digits_.size());
    for (std::size_t j = 0; j < digits_.size(); ++j) {
      r[j] = entries_[digits_[j]].second;
    }
    return r;
  }

  void next() {
    for (std::size_t j = digits_.size(); j-- > 0;) {
      if (++digits_[j] < entries_.size()) {
        word_.letters[j] = entries_[digits_[j]].first;
        return;
      }
      digits_[j] = 0;
      word_.letters[j] = entries_[0].first;
    }
    done_ = true;
  }

 private:
  const std::vector<std::pair<Element, double>>& entries_;
  std::vector<std::size_t> digits_;
  Word word_;
  bool done_;
};

}  // namespace

InsertionReport verify_insertion(const GroupSpec& g, const RateMeasure& mu,
                                 std::size_t n, const Element& z) {
  const auto& entries = mu.entries();
  const double m = static_cast<double>(entries.size());
  const double size_estimate = std::pow(m, static_cast<double>(n + 1)) *
                               static_cast<double>(n + 1);
  if (size_estimate > 1e7) {
    std::ostringstream msg;
    msg << "verify_insertion: exhaustive range exceeded (" << size_estimate
        << " word-position pairs > 1e7)";
    throw std::domain_error(msg.str());
  }

  InsertionReport report;
  report.value_shift = true;
  report.weight_product = true;
  report.preimage_counts = true;
  report.image_characterized = true;

  const auto record = [&](const char* property, const Word& w,
                          std::size_t i) {
    if (!report.first_counterexample.empty()) return;
    std::ostringstream msg;
    msg << property << " failed at word (";
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j) msg << ", ";
      msg << g.to_string(w.letters[j]);
    }
    msg << "), position " << i;
    report.first_counterexample = msg.str();
  };

  const double rate_z = mu.at(z);
  std::unordered_map<Element, std::uint64_t, ElementHash> image_count;

  for (WordEnumerator e(entries, n); !e.done(); e.next()) {
    const Word& w = e.word();
    ++report.words_checked;
    const Element val_w = word_value(g, w);
    const Element val_shifted = g.multiply(val_w, z);
    std::vector<double> base_rates = e.rates();
    base_rates.push_back(rate_z);
    const double expected_weight = canonical_weight(base_rates);

    for (std::size_t i = 1; i <= n + 1; ++i) {
      ++report.insertions_checked;
      const Word eta = insert_conjugated(g, w, i, z);
      ++image_count[word_key(eta)];

      if (word_value(g, eta) != val_shifted) {
        report.value_shift = false;
        record("value shift", w, i);
      }
      std::vector<double> eta_rates(eta.size());
      for (std::size_t j = 0; j < eta.size(); ++j) {
        eta_rates[j] = mu.at(eta.letters[j]);
      }
      if (canonical_weight(std::move(eta_rates)) != expected_weight) {
        report.weight_product = false;
        record("weight product", w, i);
      }
    }
  }

  for (WordEnumerator e(entries, n); !e.done(); e.next()) {
    const Word& w = e.word();
    const std::uint64_t expected = 1 + suffix_match_count(g, w, z);
    for (std::size_t i = 1; i <= n + 1; ++i) {
      const Word eta = insert_conjugated(g, w, i, z);
      if (image_count.at(word_key(eta)) != expected) {
        report.preimage_counts = false;
        record("preimage count", w, i);
      }
    }
  }

  for (WordEnumerator e(entries, n + 1); !e.done(); e.next()) {
    const Word& eta = e.word();
    const bool in_image = image_count.count(word_key(eta)) != 0;
    const bool has_match = suffix_match_count(g, eta, z) != 0;
    if (in_image != has_match) {
      report.image_characterized = false;
      record("image characterization", eta, 0);
    }
  }

  return report;
}

double JointLaw::at(const Element& x, std::size_t k) const {
  auto it = std::lower_bound(
      rows.begin(), rows.end(), x,
      [](const std::pair<Element, std::vector<double>>& row,
         const Element& key) { return row.first < key; });
  if (it == rows.end() || it->first != x || k >= it->second.size()) return 0.0;
  return it->second[k];
}

Pmf JointLaw::value_marginal() const {
  std::vector<std::pair<Element, double>> entries;
  entries.reserve(rows.size());
  for (const auto& [x, counts] : rows) {
    entries.emplace_back(x, compensated_sum(counts));
  }
  return Pmf::from_entries(std::move(entries));
}

std::vector<double> JointLaw::count_marginal() const {
  std::vector<CompensatedSum> acc(n + 1);
  for (const auto& [x, counts] : rows) {
    for (std::size_t k = 0; k < counts.size(); ++k) acc[k].add(counts[k]);
  }
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = acc[k].value();
  return out;
}

double JointLaw::total_mass() const {
  CompensatedSum acc;
  for (const auto& [x, counts] : rows) {
    for (double p : counts) acc.add(p);
  }
  return acc.value();
}

namespace {

/// Incremental (suffix product, match count) dynamic program.  Dense table
/// on finite groups, sorted-map table on (possibly infinite) lattices.
class JointStepper {
 public:
  JointStepper(const GroupSpec& g, const RateMeasure& mu, const Element& z)
      : g_(g), z_(z) {
    require_unit_mass(mu, "joint law");
    const auto& entries = mu.entries();
    const double total = mu.total_mass();
    steps_.reserve(entries.size());
    rates_.reserve(entries.size());
    for (const auto& [u, r] : entries) {
      steps_.push_back(u);
      rates_.push_back(r / total);
    }
    dense_ = g.is_finite();
    if (dense_) {
      idx_ = enumerate_group(g);
      const std::size_t ns = idx_.size();
      left_gather_.resize(steps_.size() * ns);
      trigger_.resize(steps_.size() * ns);
      for (std::size_t u = 0; u < steps_.size(); ++u) {
        const Element inv = g.inverse(steps_[u]);
        for (std::size_t s = 0; s < ns; ++s) {
          left_gather_[u * ns + s] = idx_.at(g.multiply(inv, idx_.elements[s]));
          trigger_[u * ns + s] =
              g.conjugate(idx_.elements[s], z) == steps_[u] ? 1 : 0;
        }
      }
      table_.assign(ns, 0.0);
      table_[0] = 1.0;  // identity has index 0
    } else {
      sparse_[g.identity()] = {1.0};
    }
  }

  std::size_t n() const { return n_; }

  void step() {
    const std::size_t counts = n_ + 1;
    if (dense_) {
      const std::size_t ns = idx_.size();
      std::vector<double> out;
      kernels::dp_step_auto(table_, ns, counts, left_gather_, trigger_,
                            rates_, out);
      table_ = std::move(out);
    } else {
      std::map<Element, std::vector<double>> next;
      for (const auto& [s, vec] : sparse_) {
        for (std::size_t u = 0; u < steps_.size(); ++u) {
          const std::size_t trig =
              g_.conjugate(s, z_) == steps_[u] ? 1 : 0;
          auto& nv = next[g_.multiply(steps_[u], s)];
          if (nv.empty()) nv.assign(counts + 1, 0.0);
          for (std::size_t k = 0; k < counts; ++k) {
            nv[k + trig] += rates_[u] * vec[k];
          }
        }
      }
      sparse_ = std::move(next);
      if (sparse_.size() * (counts + 1) > 50000000) {
        throw std::runtime_error("joint law: state space too large");
      }
    }
    ++n_;
  }

  std::vector<double> count_marginal() const {
    std::vector<CompensatedSum> acc(n_ + 1);
    if (dense_) {
      const std::size_t counts = n_ + 1;
      for (std::size_t s = 0; s < idx_.size(); ++s) {
        for (std::size_t k = 0; k < counts; ++k) {
          acc[k].add(table_[s * counts + k]);
        }
      }
    } else {
      for (const auto& [s, vec] : sparse_) {
        for (std::size_t k = 0; k < vec.size(); ++k) acc[k].add(vec[k]);
      }
    }
    std::vector<double> out(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) out[k] = acc[k].value();
    return out;
  }

  /// sum_{k >= 1} P(value = x, count = k).
  double row_mass_nonzero_count(const Element& x) const {
    double sum = 0.0;
    visit_row(x, [&](std::size_t k, double p) {
      if (k >= 1) sum += p;
    });
    return sum;
  }

  /// sum_k P(value = x, count = k) / (1 + k).
  double row_inverse_weighted(const Element& x) const {
    double sum = 0.0;
    visit_row(x, [&](std::size_t k, double p) {
      sum += p / static_cast<double>(1 + k);
    });
    return sum;
  }

  JointLaw to_joint_law() const {
    JointLaw law;
    law.n = n_;
    law.z = z_;
    const std::size_t counts = n_ + 1;
    if (dense_) {
      for (std::size_t s = 0; s < idx_.size(); ++s) {
        std::vector<double> row(table_.begin() +
                                    static_cast<std::ptrdiff_t>(s * counts),
                                table_.begin() +
                                    static_cast<std::ptrdiff_t>((s + 1) * counts));
        if (std::all_of(row.begin(), row.end(),
                        [](double p) { return p == 0.0; })) {
          continue;
        }
        law.rows.emplace_back(idx_.elements[s], std::move(row));
      }
    } else {
      for (const auto& [s, vec] : sparse_) {
        std::vector<double> row = vec;
        row.resize(counts, 0.0);
        law.rows.emplace_back(s, std::move(row));
      }
    }
    return law;
  }

 private:
  template <typename Visit>
  void visit_row(const Element& x, Visit&& visit) const {
    if (dense_) {
      auto it = idx_.position.find(x);
      if (it == idx_.position.end()) return;
      const std::size_t counts = n_ + 1;
      const std::size_t base = static_cast<std::size_t>(it->second) * counts;
      for (std::size_t k = 0; k < counts; ++k) visit(k, table_[base + k]);
    } else {
      auto it = sparse_.find(x);
      if (it == sparse_.end()) return;
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        visit(k, it->second[k]);
      }
    }
  }

  const GroupSpec& g_;
  Element z_;
  std::vector<Element> steps_;
  std::vector<double> rates_;
  bool dense_ = false;
  std::size_t n_ = 0;

  GroupIndex idx_;
  std::vector<std::uint32_t> left_gather_;
  std::vector<std::uint8_t> trigger_;
  std::vector<double> table_;  // [state][count], row-major

  std::map<Element, std::vector<double>> sparse_;
};

double poisson_pmf(double mean, std::size_t k) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

}  // namespace

JointLaw joint_endpoint_count_law(const GroupSpec& g, const RateMeasure& mu,
                                  std::size_t n, const Element& z) {
  if (n > 200) {
    throw std::invalid_argument("joint_endpoint_count_law: n > 200");
  }
  JointStepper stepper(g, mu, z);
  for (std::size_t i = 0; i < n; ++i) stepper.step();
  return stepper.to_joint_law();
}

CountLawReport verify_poisson_count_law(const GroupSpec& g,
                                        const RateMeasure& mu, double t,
                                        const Element& z, double tol) {
  const PoissonWeights mix = poisson_weights(t, 1e-12);
  if (mix.n_max > 400) {
    throw std::runtime_error(
        "verify_poisson_count_law: Poisson truncation beyond supported "
        "range");
  }
  const std::size_t n_max = static_cast<std::size_t>(mix.n_max);

  JointStepper stepper(g, mu, z);
  std::vector<CompensatedSum> mixed(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) stepper.step();
    const std::vector<double> cm = stepper.count_marginal();
    for (std::size_t k = 0; k < cm.size(); ++k) {
      mixed[k].add(mix.weights[n] * cm[k]);
    }
  }

  CountLawReport report;
  report.mean = t * mu.at(z) / mu.total_mass();
  for (std::size_t k = 0; k <= n_max; ++k) {
    report.max_deviation =
        std::max(report.max_deviation,
                 std::abs(mixed[k].value() - poisson_pmf(report.mean, k)));
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

ChangeOfMeasureReport verify_change_of_measure(const GroupSpec& g,
                                               const RateMeasure& mu, double t,
                                               const Element& x,
                                               const Element& z, double tol) {
  const PoissonWeights mix = poisson_weights(t, 1e-12);
  if (mix.n_max > 400) {
    throw std::runtime_error(
        "verify_change_of_measure: Poisson truncation beyond supported "
        "range");
  }
  const std::size_t n_max = static_cast<std::size_t>(mix.n_max);

  const Element xz = g.multiply(x, z);
  JointStepper stepper(g, mu, z);
  CompensatedSum lhs_acc, expectation_acc;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) stepper.step();
    lhs_acc.add(mix.weights[n] * stepper.row_mass_nonzero_count(xz));
    expectation_acc.add(mix.weights[n] * stepper.row_inverse_weighted(x));
  }

  ChangeOfMeasureReport report;
  report.lhs = lhs_acc.value();
  report.rhs = t * (mu.at(z) / mu.total_mass()) * expectation_acc.value();
  report.gap = std::abs(report.lhs - report.rhs);
  report.pass = report.gap <= tol;
  return report;
}

}  // namespace cirw

#pragma once

#include "polarcc/bounds.hpp"
#include "polarcc/channel_spec.hpp"
#include "polarcc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace polarcc {

/// Linear block code of length 2^n with the unfrozen positions carrying
/// information and frozen positions fixed to zero.
struct PolarCode {
  int n = 0;
  std::vector<std::uint32_t> info;  // ascending information-set indices
  std::vector<std::uint8_t> frozen;  // frozen[i] != 0 marks a frozen position

  static PolarCode from_info_set(int n, std::vector<std::uint32_t> indices) {
    PolarCode code;
    code.n = n;
    code.info = std::move(indices);
    code.frozen.assign(size_t(1) << n, 1);
    for (std::uint32_t i : code.info) {
      if (i >= code.frozen.size()) throw std::invalid_argument("info index out of range");
      code.frozen[i] = 0;
    }
    return code;
  }

  std::uint32_t block_length() const { return std::uint32_t(1) << n; }
  double rate() const {
    return static_cast<double>(info.size()) / static_cast<double>(block_length());
  }
};

/// Kronecker-power transform over GF(2), computed in place by the butterfly
/// network in natural order (no bit-reversal anywhere in this codebase).
/// The transform is an involution.
inline std::vector<std::uint8_t> encode(std::vector<std::uint8_t> u) {
  const size_t len = u.size();
  if (len == 0 || (len & (len - 1)) != 0)
    throw std::invalid_argument("block length must be a power of two");
  for (size_t half = 1; half < len; half <<= 1)
    for (size_t base = 0; base < len; base += 2 * half)
      for (size_t i = base; i < base + half; ++i) u[i] ^= u[i + half];
  return u;
}

/// Three-valued message algebra for erasure channels: +1 (bit is zero),
/// -1 (bit is one), 0 (erased).  Avoids infinities entirely.
struct BecAlgebra {
  using Sym = std::int8_t;
  static Sym f(Sym a, Sym b) { return static_cast<Sym>(a * b); }
  static Sym g(Sym a, Sym b, std::uint8_t s) {
    const int v = (s ? -a : a) + b;
    return static_cast<Sym>((v > 0) - (v < 0));
  }
  static int decide(Sym v) { return v < 0 ? 1 : 0; }  // ties decode to zero
  static bool is_tie(Sym v) { return v == 0; }
};

/// Log-likelihood-ratio algebra with the exact check combination.
struct LlrAlgebra {
  using Sym = double;
  static constexpr double big = 1e30;  // finite stand-in for a certain symbol
  static Sym f(Sym a, Sym b) {
    const double m = std::min(std::fabs(a), std::fabs(b));
    const double s = (a < 0) == (b < 0) ? m : -m;
    return s + std::log1p(std::exp(-std::fabs(a + b))) -
           std::log1p(std::exp(-std::fabs(a - b)));
  }
  static Sym g(Sym a, Sym b, std::uint8_t s) { return (s ? -a : a) + b; }
  static int decide(Sym v) { return v < 0 ? 1 : 0; }
  static bool is_tie(Sym v) { return v == 0; }
};

/// Successive decoder over a pluggable message algebra.  The per-bit hook
/// receives (index, decision, tie) and returns the bit to commit, which lets
/// the same recursion serve frozen-aware decoding and genie-aided probing.
template <typename Alg>
class ScDecoder {
 public:
  using Sym = typename Alg::Sym;

  explicit ScDecoder(int n) : n_(n) {
    alpha_.resize(size_t(n) + 1);
    beta_.resize(size_t(n) + 1);
    for (int d = 0; d <= n; ++d) {
      alpha_[size_t(d)].resize(size_t(1) << (n - d));
      beta_[size_t(d)].resize(size_t(1) << (n - d));
    }
  }

  template <typename Hook>
  std::vector<std::uint8_t> decode(const std::vector<Sym>& channel_llrs, Hook&& hook) {
    if (channel_llrs.size() != size_t(1) << n_)
      throw std::invalid_argument("observation length must match the block length");
    alpha_[0] = channel_llrs;
    out_.assign(size_t(1) << n_, 0);
    recurse(0, 0, hook);
    return out_;
  }

 private:
  template <typename Hook>
  void recurse(int depth, std::uint32_t base, Hook& hook) {
    const size_t m = size_t(1) << (n_ - depth);
    if (m == 1) {
      const Sym v = alpha_[size_t(depth)][0];
      const std::uint8_t bit = hook(base, Alg::decide(v), Alg::is_tie(v));
      beta_[size_t(depth)][0] = bit;
      out_[base] = bit;
      return;
    }
    auto& a = alpha_[size_t(depth)];
    auto& ac = alpha_[size_t(depth) + 1];
    auto& b = beta_[size_t(depth)];
    auto& bc = beta_[size_t(depth) + 1];
    const size_t half = m / 2;
    for (size_t i = 0; i < half; ++i) ac[i] = Alg::f(a[i], a[i + half]);
    recurse(depth + 1, base, hook);
    for (size_t i = 0; i < half; ++i) b[i] = bc[i];
    for (size_t i = 0; i < half; ++i) ac[i] = Alg::g(a[i], a[i + half], b[i]);
    recurse(depth + 1, base + std::uint32_t(half), hook);
    for (size_t i = 0; i < half; ++i) {
      b[i] ^= bc[i];
      b[i + half] = bc[i];
    }
  }

  int n_;
  std::vector<std::vector<Sym>> alpha_;
  std::vector<std::vector<std::uint8_t>> beta_;
  std::vector<std::uint8_t> out_;
};

/// Channel output symbols for the decoder front end.
enum class ObsSymbol : std::uint8_t { Zero = 0, One = 1, Erased = 2 };

namespace detail {

inline std::vector<BecAlgebra::Sym> bec_symbols(const std::vector<std::uint8_t>& obs) {
  std::vector<BecAlgebra::Sym> s(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    if (obs[i] > 2) throw std::invalid_argument("erasure-channel observation must be 0, 1 or 2");
    s[i] = obs[i] == 2 ? BecAlgebra::Sym(0) : (obs[i] ? BecAlgebra::Sym(-1) : BecAlgebra::Sym(1));
  }
  return s;
}

inline std::vector<double> bsc_llrs(const std::vector<std::uint8_t>& obs, double p) {
  double mag;
  if (p == 0.0)
    mag = LlrAlgebra::big;
  else if (p == 1.0)
    mag = -LlrAlgebra::big;
  else
    mag = std::log((1.0 - p) / p);
  std::vector<double> s(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    if (obs[i] > 1) throw std::invalid_argument("symmetric-channel observation must be a bit");
    s[i] = obs[i] ? -mag : mag;
  }
  return s;
}

template <typename Alg>
std::vector<std::uint8_t> run_frozen_decode(int n, const std::vector<typename Alg::Sym>& s,
                                            const PolarCode& code) {
  ScDecoder<Alg> dec(n);
  auto estimates = dec.decode(s, [&code](std::uint32_t i, int decision, bool) {
    return code.frozen[i] ? std::uint8_t(0) : std::uint8_t(decision);
  });
  std::vector<std::uint8_t> info(code.info.size());
  for (size_t k = 0; k < code.info.size(); ++k) info[k] = estimates[code.info[k]];
  return info;
}

}  // namespace detail

/// Decodes one block of channel observations (0/1 bits; 2 marks an erasure
/// on the erasure channel) and returns the information bits.  Frozen
/// positions are known to be zero; decision ties resolve to zero.
inline std::vector<std::uint8_t> sc_decode(const ChannelSpec& channel,
                                           const std::vector<std::uint8_t>& obs,
                                           const PolarCode& code) {
  if (obs.size() != code.block_length())
    throw std::invalid_argument("observation length must match the block length");
  switch (channel.kind) {
    case ChannelKind::Bec:
      return detail::run_frozen_decode<BecAlgebra>(code.n, detail::bec_symbols(obs), code);
    case ChannelKind::Bsc:
      return detail::run_frozen_decode<LlrAlgebra>(
          code.n, detail::bsc_llrs(obs, channel.parameter), code);
    case ChannelKind::Mixture:
      throw std::invalid_argument(
          "mixture channels are decoded through the simulator's soft outputs");
  }
  throw std::invalid_argument("bad channel spec");
}

/// Monte Carlo record.  Reproducible: the same seed yields the same report.
struct SimReport {
  std::string channel;
  int n = 0;
  double rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t block_errors = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> genie_bit_errors;  // decision wrong or tied, per index
};

/// Simulates transmission of the all-zero codeword (the channels are
/// symmetric, so every codeword has the same error behavior).  Each trial
/// runs the frozen-aware decoder for the block-error count and a genie-aided
/// pass (true past bits) for the per-index error counts; a tie counts as a
/// genie error.  Reducing to the all-zero word is only valid for a decoder
/// that treats the two bit values symmetrically, so inside the simulator an
/// information-bit tie is resolved by a fair coin from the trial's stream
/// rather than by the deterministic tie-to-zero rule of sc_decode.
inline SimReport simulate(const ChannelSpec& channel, const PolarCode& code,
                          std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("at least one trial is required");
  const std::uint32_t len = code.block_length();
  SimReport rep;
  rep.channel = format_channel_spec(channel);
  rep.n = code.n;
  rep.rate = code.rate();
  rep.trials = trials;
  rep.seed = seed;
  rep.genie_bit_errors.assign(len, 0);

  const Density mix = channel.kind == ChannelKind::Mixture ? to_density(channel) : Density();

  ScDecoder<BecAlgebra> bec_dec(code.n);
  ScDecoder<LlrAlgebra> llr_dec(code.n);
  std::vector<BecAlgebra::Sym> bec_syms(len);
  std::vector<double> llrs(len);

  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    switch (channel.kind) {
      case ChannelKind::Bec:
        for (std::uint32_t i = 0; i < len; ++i)
          bec_syms[i] = uniform01(rng) < channel.parameter ? BecAlgebra::Sym(0)
                                                           : BecAlgebra::Sym(1);
        break;
      case ChannelKind::Bsc: {
        double mag = channel.parameter == 0.0
                         ? LlrAlgebra::big
                         : channel.parameter == 1.0
                               ? -LlrAlgebra::big
                               : std::log((1.0 - channel.parameter) / channel.parameter);
        for (std::uint32_t i = 0; i < len; ++i)
          llrs[i] = uniform01(rng) < channel.parameter ? -mag : mag;
        break;
      }
      case ChannelKind::Mixture:
        for (std::uint32_t i = 0; i < len; ++i) {
          double u = uniform01(rng);
          Eigen::Index k = 0;
          while (k + 1 < mix.size() && u >= mix.mass(k)) {
            u -= mix.mass(k);
            ++k;
          }
          const double d = mix.support(k);
          const double mag = d >= 1.0 ? LlrAlgebra::big : 2.0 * std::atanh(d);
          llrs[i] = uniform01(rng) < (1.0 - d) / 2.0 ? -mag : mag;
        }
        break;
    }

    auto frozen_hook = [&code, &rng](std::uint32_t i, int decision, bool tie) {
      if (code.frozen[i]) return std::uint8_t(0);
      if (tie) return std::uint8_t(uniform01(rng) < 0.5);
      return std::uint8_t(decision);
    };
    auto genie_hook = [&rep](std::uint32_t i, int decision, bool tie) {
      if (decision != 0 || tie) ++rep.genie_bit_errors[i];
      return std::uint8_t(0);  // true bit of the all-zero word
    };

    bool block_error = false;
    if (channel.kind == ChannelKind::Bec) {
      auto est = bec_dec.decode(bec_syms, frozen_hook);
      for (std::uint8_t b : est) block_error |= b != 0;
      bec_dec.decode(bec_syms, genie_hook);
    } else {
      auto est = llr_dec.decode(llrs, frozen_hook);
      for (std::uint8_t b : est) block_error |= b != 0;
      llr_dec.decode(llrs, genie_hook);
    }
    rep.block_errors += block_error;
  }
  return rep;
}

enum class IndexSelector { Greedy, BecProxy };

struct CompoundCode {
  PolarCode code;
  IndexSelection selection;
};

/// Builds the common code for a channel pair: picks the indices whose
/// worst-case Bhattacharyya sum stays within the block-error budget.
inline CompoundCode build_compound_code(const ChannelSpec& p, const ChannelSpec& q,
                                        int n, double budget,
                                        int m = QuantizerMode::default_grid,
                                        IndexSelector selector = IndexSelector::Greedy,
                                        int threads = 1) {
  const Density dp = to_density(p), dq = to_density(q);
  IndexSelection sel = selector == IndexSelector::Greedy
                           ? select_compound_good_indices(dp, dq, n, budget, m, threads)
                           : bec_proxy_select(dp, dq, n, budget);
  PolarCode code = PolarCode::from_info_set(n, sel.indices);
  return {std::move(code), std::move(sel)};
}

}  // namespace polarcc

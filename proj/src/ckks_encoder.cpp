// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "hekl/ckks.hpp"
#include "hekl/errors.hpp"

namespace hekl {

namespace {

void bit_reverse_permute(std::vector<std::complex<double>>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
}

}  // namespace

Encoder::Encoder(const CkksContext& ctx) : ctx_(ctx) {
  const std::size_t m = 2 * ctx.n();
  roots_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    roots_[k] = {std::cos(angle), std::sin(angle)};
  }
  rot_group_.resize(slot_count());
  std::size_t g = 1;
  for (auto& r : rot_group_) {
    r = g;
    g = g * 5 % m;
  }
}

// Evaluates the slot polynomial at psi^(5^j) for every slot j.
void Encoder::special_fft(std::vector<std::complex<double>>& v) const {
  const std::size_t size = v.size();
  const std::size_t m = 2 * ctx_.n();
  bit_reverse_permute(v);
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t quarter_period = len << 2;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::size_t idx = (rot_group_[j] % quarter_period) * (m / quarter_period);
        const auto u = v[i + j];
        const auto w = v[i + j + half] * roots_[idx];
        v[i + j] = u + w;
        v[i + j + half] = u - w;
      }
    }
  }
}

void Encoder::special_ifft(std::vector<std::complex<double>>& v) const {
  const std::size_t size = v.size();
  const std::size_t m = 2 * ctx_.n();
  for (std::size_t len = size; len >= 2; len >>= 1) {
    const std::size_t half = len >> 1;
    const std::size_t quarter_period = len << 2;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::size_t idx = (quarter_period - rot_group_[j] % quarter_period) * (m / quarter_period);
        const auto u = v[i + j] + v[i + j + half];
        const auto w = (v[i + j] - v[i + j + half]) * roots_[idx % m];
        v[i + j] = u;
        v[i + j + half] = w;
      }
    }
  }
  bit_reverse_permute(v);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& x : v) x *= inv;
}

std::vector<double> Encoder::embed_inverse(std::span<const std::complex<double>> slots) const {
  if (slots.size() != slot_count()) {
    throw ParameterError("expected " + std::to_string(slot_count()) + " slots, got " + std::to_string(slots.size()));
  }
  std::vector<std::complex<double>> v(slots.begin(), slots.end());
  special_ifft(v);
  const std::size_t half = slot_count();
  std::vector<double> coeffs(ctx_.n());
  for (std::size_t i = 0; i < half; ++i) {
    coeffs[i] = v[i].real();
    coeffs[i + half] = v[i].imag();
  }
  return coeffs;
}

std::vector<std::complex<double>> Encoder::embed(std::span<const double> coeffs) const {
  if (coeffs.size() != ctx_.n()) throw ParameterError("coefficient count does not match ring degree");
  const std::size_t half = slot_count();
  std::vector<std::complex<double>> v(half);
  for (std::size_t i = 0; i < half; ++i) v[i] = {coeffs[i], coeffs[i + half]};
  special_fft(v);
  return v;
}

Plaintext Encoder::encode(std::span<const std::complex<double>> slots, double scale, std::size_t level) const {
  if (!(scale > 0) || !std::isfinite(scale)) throw ParameterError("encoding scale must be positive");
  if (level == 0 || level > ctx_.max_level()) throw ParameterError("encoding level outside the modulus chain");
  std::vector<double> coeffs = embed_inverse(slots);

  double max_abs = 0;
  for (auto& c : coeffs) {
    c = std::round(c * scale);
    if (!std::isfinite(c)) throw ParameterError("encoded value is not finite");
    max_abs = std::max(max_abs, std::fabs(c));
  }
  double log_q = 0;
  for (std::size_t i = 0; i < level; ++i) log_q += std::log2(static_cast<double>(ctx_.basis().prime(i).value()));
  if (max_abs > 0 && std::log2(max_abs) >= log_q - 1) {
    throw ParameterError("scaled plaintext overflows the modulus at level " + std::to_string(level));
  }

  Plaintext pt{ctx_.make_poly_uninit(level, Domain::kCoefficient), scale};
  for (std::size_t r = 0; r < level; ++r) {
    const Modulus& m = ctx_.basis().prime(r);
    auto dst = pt.poly.row(r);
    for (std::size_t j = 0; j < coeffs.size(); ++j) dst[j] = reduce_double(coeffs[j], m);
  }
  ctx_.to_ntt(pt.poly);
  return pt;
}

std::vector<std::complex<double>> Encoder::decode(const Plaintext& pt) const {
  RnsPolynomial poly = pt.poly;
  ctx_.to_coeff(poly);
  std::vector<double> coeffs = compose_centered(poly, ctx_.basis());
  const double inv = 1.0 / pt.scale;
  for (auto& c : coeffs) c *= inv;
  return embed(coeffs);
}

}  // namespace hekl

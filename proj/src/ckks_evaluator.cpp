// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include "hekl/ckks.hpp"
#include "hekl/errors.hpp"
#include "sampling.hpp"

namespace hekl {

// ---------------------------------------------------------------------------
// Encryption

Encryptor::Encryptor(const CkksContext& ctx, const PublicKey& pk)
    : ctx_(ctx), pk_(pk), rng_(ctx.params().seed ^ 0x9e3779b97f4a7c15ULL) {}

Ciphertext Encryptor::encrypt(const Plaintext& pt) {
  const std::size_t level = pt.level();
  if (level == 0 || level > ctx_.max_level()) throw ParameterError("plaintext level outside the modulus chain");
  if (pt.poly.domain() != Domain::kNtt) throw StateError("plaintext must be in NTT domain");
  const std::size_t n = ctx_.n();
  const double sigma = ctx_.params().error_sigma;

  RnsPolynomial v = detail::poly_from_small(ctx_, detail::sample_ternary(rng_, n), level, false);
  RnsPolynomial c0 = detail::poly_from_small(ctx_, detail::sample_gaussian(rng_, n, sigma), level, false);
  RnsPolynomial c1 = detail::poly_from_small(ctx_, detail::sample_gaussian(rng_, n, sigma), level, false);
  ctx_.to_ntt(v);
  ctx_.to_ntt(c0);
  ctx_.to_ntt(c1);
  for (std::size_t r = 0; r < level; ++r) {
    const Modulus& m = ctx_.basis().prime(r);
    auto vr = v.row(r);
    auto c0r = c0.row(r);
    auto c1r = c1.row(r);
    auto br = pk_.b.row(r);
    auto ar = pk_.a.row(r);
    auto mr = pt.poly.row(r);
    for (std::size_t c = 0; c < n; ++c) {
      c0r[c] = add_mod(mad_mod(vr[c], br[c], c0r[c], m), mr[c], m);
      c1r[c] = mad_mod(vr[c], ar[c], c1r[c], m);
    }
  }
  Ciphertext ct;
  ct.polys.reserve(3);
  ct.polys.push_back(std::move(c0));
  ct.polys.push_back(std::move(c1));
  ct.scale = pt.scale;
  return ct;
}

Plaintext Decryptor::decrypt(const Ciphertext& ct) const {
  if (ct.size() != 2) throw StateError("decrypt needs a size-2 ciphertext; relinearize first");
  const std::size_t level = ct.level();
  Plaintext pt{ctx_.make_poly_uninit(level, Domain::kNtt), ct.scale};
  for (std::size_t r = 0; r < level; ++r) {
    const Modulus& m = ctx_.basis().prime(r);
    auto out = pt.poly.row(r);
    auto c0 = ct.polys[0].row(r);
    auto c1 = ct.polys[1].row(r);
    auto s = sk_.s.row(r);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = mad_mod(c1[c], s[c], c0[c], m);
  }
  return pt;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void check_compatible(const Ciphertext& a, const Ciphertext& b) {
  if (a.level() != b.level()) {
    throw ParameterError("ciphertext levels differ: " + std::to_string(a.level()) + " vs " +
                         std::to_string(b.level()));
  }
  if (a.scale != b.scale) throw ParameterError("ciphertext scales differ");
}

}  // namespace

void Evaluator::add_inplace(Ciphertext& a, const Ciphertext& b) const {
  check_compatible(a, b);
  if (a.size() != b.size()) throw ParameterError("ciphertext sizes differ");
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t r = 0; r < a.level(); ++r) {
      const Modulus& m = ctx_.basis().prime(r);
      auto x = a.polys[k].row(r);
      auto y = b.polys[k].row(r);
      for (std::size_t c = 0; c < x.size(); ++c) x[c] = add_mod(x[c], y[c], m);
    }
  }
}

Ciphertext Evaluator::add(const Ciphertext& a, const Ciphertext& b) const {
  Ciphertext out;
  out.scale = a.scale;
  for (const auto& poly : a.polys) out.polys.push_back(ctx_.clone(poly));
  add_inplace(out, b);
  return out;
}

Ciphertext Evaluator::multiply(const Ciphertext& a, const Ciphertext& b) const {
  if (a.size() != 2 || b.size() != 2) throw StateError("multiply needs size-2 operands");
  if (a.level() != b.level()) throw ParameterError("ciphertext levels differ");
  const std::size_t level = a.level();
  Ciphertext out;
  out.polys.reserve(3);
  for (int k = 0; k < 3; ++k) out.polys.push_back(ctx_.make_poly_uninit(level, Domain::kNtt));
  for (std::size_t r = 0; r < level; ++r) {
    const Modulus& m = ctx_.basis().prime(r);
    auto a0 = a.polys[0].row(r);
    auto a1 = a.polys[1].row(r);
    auto b0 = b.polys[0].row(r);
    auto b1 = b.polys[1].row(r);
    auto d0 = out.polys[0].row(r);
    auto d1 = out.polys[1].row(r);
    auto d2 = out.polys[2].row(r);
    for (std::size_t c = 0; c < d0.size(); ++c) {
      d0[c] = mul_mod(a0[c], b0[c], m);
      d1[c] = mad_mod(a1[c], b0[c], mul_mod(a0[c], b1[c], m), m);
      d2[c] = mul_mod(a1[c], b1[c], m);
    }
  }
  out.scale = a.scale * b.scale;
  return out;
}

Ciphertext Evaluator::square(const Ciphertext& a) const { return multiply(a, a); }

void Evaluator::switch_key(const RnsPolynomial& target, const KeySwitchKey& key, RnsPolynomial& out0,
                           RnsPolynomial& out1) const {
  const std::size_t levels = ctx_.max_level();
  const std::size_t level = target.level();
  if (target.domain() != Domain::kNtt) throw StateError("key switching expects an NTT-domain input");
  if (key.parts.size() < level || key.parts.front()[0].level() != levels + 1) {
    throw ParameterError("key-switching key does not cover level " + std::to_string(level));
  }
  const std::size_t n = ctx_.n();
  const std::size_t ext = level + 1;

  RnsPolynomial digits = ctx_.clone(target);
  ctx_.to_coeff(digits);
  RnsPolynomial acc0 = ctx_.make_poly(ext, Domain::kNtt);
  RnsPolynomial acc1 = ctx_.make_poly(ext, Domain::kNtt);
  RnsPolynomial scratch = ctx_.make_poly_uninit(1, Domain::kCoefficient);
  auto tmp = scratch.row(0);

  for (std::size_t j = 0; j < level; ++j) {
    auto digit = digits.row(j);
    for (std::size_t i = 0; i < ext; ++i) {
      const NttTables& t = ctx_.row_tables(i, ext, true);
      const Modulus& m = t.modulus();
      const std::size_t key_row = i < level ? i : levels;
      std::span<const uint64_t> src;
      if (i == j) {
        src = target.row(j);
      } else {
        for (std::size_t c = 0; c < n; ++c) tmp[c] = m.reduce(digit[c]);
        ctx_.forward_row(tmp, t);
        src = tmp;
      }
      dyadic_mad(acc0.row(i), src, key.parts[j][0].row(key_row), m);
      dyadic_mad(acc1.row(i), src, key.parts[j][1].row(key_row), m);
    }
  }

  // Divide by P with rounding: (x + P/2 - ((x + P/2) mod P)) / P.
  const NttTables& pt = ctx_.special_tables();
  const Modulus& pm = pt.modulus();
  const uint64_t half = pm.value() >> 1;
  RnsPolynomial* accs[2] = {&acc0, &acc1};
  RnsPolynomial* outs[2] = {&out0, &out1};
  for (int k = 0; k < 2; ++k) {
    auto last = accs[k]->row(level);
    ctx_.inverse_row(last, pt);
    for (auto& x : last) x = add_mod(x, half, pm);
    for (std::size_t i = 0; i < level; ++i) {
      const NttTables& t = ctx_.tables(i);
      const Modulus& m = t.modulus();
      const uint64_t half_mod = m.reduce(half);
      for (std::size_t c = 0; c < n; ++c) tmp[c] = sub_mod(m.reduce(last[c]), half_mod, m);
      ctx_.forward_row(tmp, t);
      auto acc = accs[k]->row(i);
      auto out = outs[k]->row(i);
      const MulOperand& p_inv = ctx_.basis().inv_special(i);
      for (std::size_t c = 0; c < n; ++c) {
        out[c] = add_mod(out[c], mul_mod(sub_mod(acc[c], tmp[c], m), p_inv, m), m);
      }
    }
  }
}

Ciphertext Evaluator::relinearize(const Ciphertext& ct, const EvaluationKey& evk) const {
  if (ct.size() != 3) throw StateError("relinearize needs a size-3 ciphertext");
  Ciphertext out;
  out.polys.reserve(3);
  out.polys.push_back(ctx_.clone(ct.polys[0]));
  out.polys.push_back(ctx_.clone(ct.polys[1]));
  out.scale = ct.scale;
  switch_key(ct.polys[2], evk, out.polys[0], out.polys[1]);
  return out;
}

Ciphertext Evaluator::rescale(const Ciphertext& ct) const {
  if (ct.level() < 2) throw StateError("cannot rescale a level-1 ciphertext");
  const uint64_t q_last = ctx_.basis().prime(ct.level() - 1).value();
  Ciphertext out;
  out.polys.reserve(3);
  for (const auto& poly : ct.polys) {
    RnsPolynomial coeff = ctx_.clone(poly);
    ctx_.to_coeff(coeff);
    RnsPolynomial r = rescale_rows(coeff, ctx_.basis());
    ctx_.to_ntt(r);
    out.polys.push_back(std::move(r));
  }
  out.scale = ct.scale / static_cast<double>(q_last);
  return out;
}

Ciphertext Evaluator::mod_switch(const Ciphertext& ct) const {
  if (ct.level() < 2) throw StateError("cannot switch a level-1 ciphertext down");
  Ciphertext out;
  out.polys.reserve(3);
  for (const auto& poly : ct.polys) out.polys.push_back(ctx_.clone(poly, poly.level() - 1));
  out.scale = ct.scale;
  return out;
}

Ciphertext Evaluator::rotate(const Ciphertext& ct, int step, const GaloisKeys& keys) const {
  if (ct.size() != 2) throw StateError("rotate needs a size-2 ciphertext");
  if (step % static_cast<int>(ctx_.n() / 2) == 0) {
    Ciphertext same;
    same.scale = ct.scale;
    for (const auto& poly : ct.polys) same.polys.push_back(ctx_.clone(poly));
    return same;
  }
  auto it = keys.keys.find(step);
  if (it == keys.keys.end()) throw ParameterError("no Galois key for rotation step " + std::to_string(step));
  const uint64_t g = galois_element(step, ctx_.n());

  Ciphertext out;
  out.polys.reserve(3);
  out.scale = ct.scale;
  std::array<RnsPolynomial, 2> permuted;
  for (int k = 0; k < 2; ++k) {
    RnsPolynomial coeff = ctx_.clone(ct.polys[k]);
    ctx_.to_coeff(coeff);
    permuted[k] = apply_galois(ctx_, coeff, g);
    ctx_.to_ntt(permuted[k]);
  }
  out.polys.push_back(std::move(permuted[0]));
  out.polys.push_back(ctx_.make_poly(ct.level(), Domain::kNtt));
  switch_key(permuted[1], it->second, out.polys[0], out.polys[1]);
  return out;
}

Ciphertext Evaluator::mul_lin(const Ciphertext& a, const Ciphertext& b, const EvaluationKey& evk) const {
  return relinearize(multiply(a, b), evk);
}

Ciphertext Evaluator::mul_lin_rs(const Ciphertext& a, const Ciphertext& b, const EvaluationKey& evk) const {
  return rescale(relinearize(multiply(a, b), evk));
}

Ciphertext Evaluator::sqr_lin_rs(const Ciphertext& a, const EvaluationKey& evk) const {
  return rescale(relinearize(square(a), evk));
}

Ciphertext Evaluator::mul_lin_rs_modsw_add(const Ciphertext& a, const Ciphertext& b, const Ciphertext& c,
                                           const EvaluationKey& evk) const {
  Ciphertext prod = mul_lin_rs(a, b, evk);
  if (c.level() < prod.level()) throw ParameterError("addend is below the product's level");
  Ciphertext addend = c.level() > prod.level() ? mod_switch(c) : c;
  if (addend.level() != prod.level()) throw ParameterError("addend is more than one level above the product");
  add_inplace(prod, addend);
  return prod;
}

}  // namespace hekl

// Copyright (C) 2026 The hekl Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hekl/bench.hpp"
#include "hekl/ckks.hpp"
#include "hekl/errors.hpp"
#include "hekl/modular_arith.hpp"
#include "hekl/ntt.hpp"
#include "hekl/perf_model.hpp"
#include "hekl/rns.hpp"

namespace py = pybind11;
using namespace hekl;

namespace {

using Slots = std::vector<std::complex<double>>;

std::vector<uint64_t> transform(std::vector<uint64_t> poly, const NttTables& t, const NttVariant& v, bool forward) {
  if (forward) {
    forward_ntt(poly, t, v);
  } else {
    inverse_ntt(poly, t, v);
  }
  return poly;
}

}  // namespace

PYBIND11_MODULE(_hekl, m) {
  m.doc() = "NTT, RNS and CKKS primitives";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<ExhaustionError>(m, "ExhaustionError", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  py::class_<Modulus>(m, "Modulus")
      .def(py::init<uint64_t>())
      .def_property_readonly("value", &Modulus::value)
      .def_property_readonly("bit_len", &Modulus::bit_len)
      .def("__int__", &Modulus::value)
      .def("__repr__", [](const Modulus& q) { return "Modulus(" + std::to_string(q.value()) + ")"; });

  m.def("add_mod", [](uint64_t x, uint64_t y, const Modulus& q) { return add_mod(x % q.value(), y % q.value(), q); });
  m.def("sub_mod", [](uint64_t x, uint64_t y, const Modulus& q) { return sub_mod(x % q.value(), y % q.value(), q); });
  m.def("mul_mod", [](uint64_t x, uint64_t y, const Modulus& q) { return mul_mod(x, y, q); });
  m.def("mad_mod", [](uint64_t a, uint64_t b, uint64_t c, const Modulus& q) {
    if (c >> 60) throw ParameterError("mad_mod addend must be below 2^60");
    return mad_mod(a % q.value(), b % q.value(), c, q);
  });
  m.def("pow_mod", &pow_mod);
  m.def("inv_mod", &inv_mod);
  m.def("is_prime", &is_prime);
  m.def("generate_primes", [](std::size_t n, int bits, std::size_t count) { return generate_primes(n, bits, count); },
        py::arg("n"), py::arg("bit_size"), py::arg("count"));

  py::class_<NttVariant>(m, "NttVariant")
      .def_static("parse", &NttVariant::parse)
      .def_static("naive", &NttVariant::naive)
      .def_static("staged2", &NttVariant::staged2, py::arg("block_gap") = kDefaultBlockGap)
      .def_static("high_radix", &NttVariant::high_radix, py::arg("radix"), py::arg("block_gap") = kDefaultBlockGap)
      .def("fitted_to", &NttVariant::fitted_to)
      .def_property_readonly("name", &NttVariant::name)
      .def("__repr__", [](const NttVariant& v) { return "NttVariant('" + v.name() + "')"; });

  py::class_<NttTables>(m, "NttTables")
      .def(py::init<std::size_t, const Modulus&>())
      .def_property_readonly("n", &NttTables::n)
      .def_property_readonly("psi", &NttTables::psi)
      .def_property_readonly("modulus", &NttTables::modulus);

  m.def("forward_ntt", [](std::vector<uint64_t> poly, const NttTables& t, const NttVariant& v) {
    return transform(std::move(poly), t, v, true);
  }, py::arg("poly"), py::arg("tables"), py::arg("variant") = NttVariant::naive());
  m.def("inverse_ntt", [](std::vector<uint64_t> poly, const NttTables& t, const NttVariant& v) {
    return transform(std::move(poly), t, v, false);
  }, py::arg("poly"), py::arg("tables"), py::arg("variant") = NttVariant::naive());
  m.def("negacyclic_poly_mul", [](const std::vector<uint64_t>& a, const std::vector<uint64_t>& b, const NttTables& t,
                                  const NttVariant& v) { return negacyclic_poly_mul(a, b, t, v.fitted_to(t.n())); },
        py::arg("a"), py::arg("b"), py::arg("tables"), py::arg("variant") = NttVariant::high_radix(8));

  py::class_<RadixCost>(m, "RadixCost")
      .def_readonly("radix", &RadixCost::radix)
      .def_readonly("other_ops", &RadixCost::other_ops)
      .def_readonly("butterfly_ops", &RadixCost::butterfly_ops)
      .def_readonly("total_ops", &RadixCost::total_ops);
  m.def("radix_cost", &radix_cost);
  m.def("operational_density", [](const NttVariant& v, std::size_t n) { return operational_density(v, n).density; });

  py::class_<CkksContext>(m, "CkksContext")
      .def(py::init([](std::size_t n, std::size_t levels, int delta_bits, uint64_t seed) {
             return std::make_unique<CkksContext>(make_parameters(n, levels, delta_bits, seed));
           }),
           py::arg("n"), py::arg("levels"), py::arg("delta_bits") = 40, py::arg("seed") = 0)
      .def_property_readonly("n", &CkksContext::n)
      .def_property_readonly("max_level", &CkksContext::max_level)
      .def_property_readonly("delta", &CkksContext::delta)
      .def_property_readonly("primes", [](const CkksContext& c) {
        std::vector<uint64_t> out;
        for (const auto& q : c.basis().primes()) out.push_back(q.value());
        return out;
      });

  py::class_<KeySet>(m, "KeySet").def("has_rotation", [](const KeySet& k, int step) { return k.galois.has(step); });
  m.def("keygen", [](const CkksContext& ctx, const std::vector<int>& steps) { return keygen(ctx, steps); },
        py::arg("ctx"), py::arg("rotation_steps") = std::vector<int>{}, py::keep_alive<0, 1>());

  py::class_<Plaintext>(m, "Plaintext")
      .def_readwrite("scale", &Plaintext::scale)
      .def_property_readonly("level", &Plaintext::level);
  py::class_<Ciphertext>(m, "Ciphertext")
      .def_readwrite("scale", &Ciphertext::scale)
      .def_property_readonly("level", &Ciphertext::level)
      .def_property_readonly("size", &Ciphertext::size);

  py::class_<Encoder>(m, "Encoder")
      .def(py::init<const CkksContext&>(), py::keep_alive<1, 2>())
      .def_property_readonly("slot_count", &Encoder::slot_count)
      .def("encode", [](const Encoder& e, const Slots& z, std::optional<double> scale) {
             return scale ? e.encode(z, *scale) : e.encode(z);
           },
           py::arg("slots"), py::arg("scale") = py::none())
      .def("decode", &Encoder::decode);

  py::class_<Encryptor>(m, "Encryptor")
      .def(py::init([](const CkksContext& ctx, const KeySet& keys) { return std::make_unique<Encryptor>(ctx, keys.pk); }),
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
      .def("encrypt", &Encryptor::encrypt);

  py::class_<Decryptor>(m, "Decryptor")
      .def(py::init([](const CkksContext& ctx, const KeySet& keys) { return std::make_unique<Decryptor>(ctx, keys.sk); }),
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
      .def("decrypt", &Decryptor::decrypt);

  py::class_<Evaluator>(m, "Evaluator")
      .def(py::init<const CkksContext&>(), py::keep_alive<1, 2>())
      .def("add", &Evaluator::add)
      .def("multiply", &Evaluator::multiply)
      .def("relinearize", [](const Evaluator& ev, const Ciphertext& c, const KeySet& k) { return ev.relinearize(c, k.evk); })
      .def("rescale", &Evaluator::rescale)
      .def("mod_switch", &Evaluator::mod_switch)
      .def("rotate", [](const Evaluator& ev, const Ciphertext& c, int step, const KeySet& k) {
        return ev.rotate(c, step, k.galois);
      })
      .def("mul_lin", [](const Evaluator& ev, const Ciphertext& a, const Ciphertext& b, const KeySet& k) {
        return ev.mul_lin(a, b, k.evk);
      })
      .def("mul_lin_rs", [](const Evaluator& ev, const Ciphertext& a, const Ciphertext& b, const KeySet& k) {
        return ev.mul_lin_rs(a, b, k.evk);
      })
      .def("sqr_lin_rs", [](const Evaluator& ev, const Ciphertext& a, const KeySet& k) { return ev.sqr_lin_rs(a, k.evk); })
      .def("mul_lin_rs_modsw_add",
           [](const Evaluator& ev, const Ciphertext& a, const Ciphertext& b, const Ciphertext& c, const KeySet& k) {
             return ev.mul_lin_rs_modsw_add(a, b, c, k.evk);
           });

  m.def("run_bench", [](const std::string& command, std::vector<std::size_t> sizes, std::size_t levels,
                        std::vector<std::string> variants, std::size_t reps, std::optional<double> peak_gops,
                        std::optional<double> bandwidth_gbs) {
    BenchConfig c;
    c.command = command;
    c.sizes = std::move(sizes);
    c.levels = levels;
    for (const auto& v : variants) c.variants.push_back(NttVariant::parse(v));
    c.reps = reps;
    if (peak_gops && bandwidth_gbs) c.machine = MachineParams{*peak_gops * 1e9, *bandwidth_gbs * 1e9};
    std::ostringstream os;
    write_report(os, run_command(c), OutputFormat::kJson);
    return os.str();
  }, py::arg("command"), py::arg("sizes") = std::vector<std::size_t>{}, py::arg("levels") = 0,
     py::arg("variants") = std::vector<std::string>{}, py::arg("reps") = 1, py::arg("peak_gops") = py::none(),
     py::arg("bandwidth_gbs") = py::none(), "Runs a hekl_bench command and returns its JSON report.");
}

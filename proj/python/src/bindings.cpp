#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "permsteg/analysis.hpp"
#include "permsteg/experiment.hpp"
#include "permsteg/log_count.hpp"
#include "permsteg/partition.hpp"
#include "permsteg/permcodec.hpp"
#include "permsteg/selector.hpp"
#include "permsteg/stego.hpp"

namespace py = pybind11;
using namespace permsteg;

namespace {

std::optional<StegoKey> key_for(const std::vector<Sample>& x, const std::optional<std::string>& passphrase,
                                std::size_t stages) {
  if (!passphrase) return std::nullopt;
  return derive_key(*passphrase, compute_histogram(x).q(), stages);
}

StegoConfig make_config(double kappa, const std::string& sequence,
                        const std::optional<std::string>& passphrase, std::size_t key_stages,
                        const std::optional<std::vector<std::vector<std::size_t>>>& groups) {
  StegoConfig cfg;
  cfg.constraint.kappa = kappa;
  cfg.constraint.sequence = parse_sequence_family(sequence);
  if (groups) cfg.constraint.groups = SupportPartitioning{*groups};
  cfg.passphrase = passphrase;
  cfg.key_stages = key_stages;
  return cfg;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["q"] = r.q;
  d["p"] = r.p;
  d["energy"] = r.energy;
  d["avg_power"] = r.avg_power;
  d["avg_power_per_element"] = r.avg_power_per_element;
  d["max_power"] = r.max_power;
  d["xi_bar"] = r.xi_bar;
  d["xi_bar_star"] = r.xi_bar_star;
  d["xi_min"] = r.xi_min;
  d["nu_bar"] = r.nu_bar;
  d["log2_count"] = r.log2_count;
  d["rho"] = r.rho;
  d["capacity"] = r.capacity;
  d["rho_emp"] = r.rho_emp;
  d["entropy"] = r.entropy;
  d["conditional_entropy"] = r.conditional_entropy;
  d["zeta"] = r.zeta;
  d["rho_u"] = r.rho_u;
  d["rho_l"] = r.rho_l;
  d["rho_l_prime"] = r.rho_l_prime;
  d["tau"] = r.tau;
  d["eps_l"] = r.eps_l;
  d["eps_l_asymptotic"] = r.eps_l_asymptotic;
  d["mean"] = r.mean;
  d["covering_radius_sq"] = r.covering_radius_sq;
  d["angle"] = r.angle;
  d["variance_spread"] = r.variance_spread;
  return d;
}

py::dict selection_dict(const Selection& s) {
  py::dict d;
  d["requested_p"] = s.requested_p;
  d["effective_p"] = s.effective_p();
  d["groups"] = s.partitioning.groups;
  d["selection_rate"] = s.selection_rate;
  d["report"] = report_dict(s.report);
  return d;
}

}  // namespace

PYBIND11_MODULE(_permsteg, m) {
  m.doc() = "Histogram-preserving permutation coding";

  auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", error.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());

  py::class_<Histogram>(m, "Histogram")
      .def_readonly("values", &Histogram::values)
      .def_readonly("counts", &Histogram::counts)
      .def_readonly("n", &Histogram::n)
      .def_property_readonly("q", &Histogram::q)
      .def("__eq__", [](const Histogram& a, const Histogram& b) { return a == b; })
      .def("__repr__", [](const Histogram& h) {
        return "Histogram(n=" + std::to_string(h.n) + ", q=" + std::to_string(h.q()) + ")";
      });

  m.def("compute_histogram", [](const std::vector<Sample>& x) { return compute_histogram(x); },
        py::arg("x"));
  m.def("capacity", [](const std::vector<Sample>& x) { return capacity_bits(compute_histogram(x)); },
        py::arg("x"), "Bits a plain rearrangement of x can carry.");
  m.def("log2_multinomial",
        [](const std::vector<std::uint64_t>& counts) { return log2_multinomial(counts); },
        py::arg("counts"));

  m.def("bytes_to_bits", [](const py::bytes& b) {
    const std::string s = b;
    return bytes_to_bits(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }, py::arg("data"));
  m.def("bits_to_bytes", [](const Bits& bits) {
    const auto bytes = bits_to_bytes(bits);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }, py::arg("bits"));

  m.def("perm_encode",
        [](const std::vector<Sample>& x, const Bits& message, const std::optional<std::string>& passphrase,
           std::size_t key_stages) { return perm_encode(x, message, key_for(x, passphrase, key_stages)); },
        py::arg("x"), py::arg("message"), py::arg("passphrase") = py::none(), py::arg("key_stages") = 1);
  m.def("perm_decode",
        [](const std::vector<Sample>& y, const std::optional<std::string>& passphrase, std::size_t key_stages) {
          return perm_decode(y, key_for(y, passphrase, key_stages));
        },
        py::arg("y"), py::arg("passphrase") = py::none(), py::arg("key_stages") = 1);

  m.def("uniform_support_sequence",
        [](const std::vector<Sample>& v, std::size_t p) { return uniform_support_sequence(v, p).groups; },
        py::arg("support"), py::arg("p"));

  m.def("analyze",
        [](const std::vector<Sample>& x, const std::optional<std::vector<std::vector<std::size_t>>>& groups,
           int value_bits) {
          const Histogram h = compute_histogram(x);
          const SupportPartitioning sp = groups ? SupportPartitioning{*groups} : trivial_support_partitioning(h.q());
          return report_dict(analyze(h, sp, value_bits));
        },
        py::arg("x"), py::arg("groups") = py::none(), py::arg("value_bits") = 8);

  m.def("select_partitioning",
        [](const std::vector<Sample>& x, double kappa, const std::string& sequence,
           const std::optional<std::vector<std::vector<std::size_t>>>& groups) {
          SelectionConstraint c;
          c.kappa = kappa;
          c.sequence = parse_sequence_family(sequence);
          if (groups) c.groups = SupportPartitioning{*groups};
          return selection_dict(select_partitioning(HostSequence{x}, c));
        },
        py::arg("x"), py::arg("kappa"), py::arg("sequence") = "uniform", py::arg("groups") = py::none());

  m.def("parse_kappa", &parse_kappa, py::arg("text"));

  m.def("embedding_capacity",
        [](const std::vector<Sample>& x, double kappa, const std::string& sequence,
           const std::optional<std::vector<std::vector<std::size_t>>>& groups) {
          return embedding_capacity(x, make_config(kappa, sequence, std::nullopt, 1, groups));
        },
        py::arg("x"), py::arg("kappa"), py::arg("sequence") = "uniform", py::arg("groups") = py::none());

  m.def("embed",
        [](const std::vector<Sample>& x, const Bits& message, double kappa, const std::string& sequence,
           const std::optional<std::string>& passphrase, std::size_t key_stages,
           const std::optional<std::vector<std::vector<std::size_t>>>& groups) {
          const EmbedResult r = embed(x, message, make_config(kappa, sequence, passphrase, key_stages, groups));
          py::dict d;
          d["stego"] = r.stego;
          d["capacity"] = r.capacity;
          d["selection"] = selection_dict(r.selection);
          d["power"] = r.empirical.power;
          d["xi"] = r.empirical.xi;
          d["nu"] = r.empirical.nu;
          d["eps"] = r.empirical.eps;
          return d;
        },
        py::arg("x"), py::arg("message"), py::arg("kappa"), py::arg("sequence") = "uniform",
        py::arg("passphrase") = py::none(), py::arg("key_stages") = 1, py::arg("groups") = py::none());

  m.def("extract",
        [](const std::vector<Sample>& y, double kappa, const std::string& sequence,
           const std::optional<std::string>& passphrase, std::size_t key_stages,
           const std::optional<std::vector<std::vector<std::size_t>>>& groups) {
          return extract(y, make_config(kappa, sequence, passphrase, key_stages, groups)).message;
        },
        py::arg("y"), py::arg("kappa"), py::arg("sequence") = "uniform", py::arg("passphrase") = py::none(),
        py::arg("key_stages") = 1, py::arg("groups") = py::none());

  m.def("binary_host", &binary_host, py::arg("n"), py::arg("omega"), py::arg("seed"));
  m.def("gaussian_host", &gaussian_host, py::arg("n"), py::arg("seed"), py::arg("mean") = 128.0,
        py::arg("sd") = 25.0, py::arg("lo") = 0, py::arg("hi") = 255);

  m.def("run_experiment",
        [](const std::string& id, std::uint64_t n, std::uint64_t seed, const std::vector<double>& grid,
           unsigned threads) { return run_experiment(ExperimentConfig{id, n, seed, grid, threads}); },
        py::arg("id"), py::arg("n") = 1'000'000, py::arg("seed") = 1, py::arg("grid") = std::vector<double>{},
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
}

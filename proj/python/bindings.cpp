#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pidkit/blackwell.hpp"
#include "pidkit/errors.hpp"
#include "pidkit/fixtures.hpp"
#include "pidkit/info.hpp"
#include "pidkit/io.hpp"
#include "pidkit/redundancy.hpp"
#include "pidkit/report.hpp"
#include "pidkit/union_info.hpp"

namespace py = pybind11;
using namespace pidkit;

namespace {

py::object to_python(const ReportJson& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

JointDistribution joint_from_text(const std::string& text) {
  return canonicalize(to_joint(parse_distribution(text))).joint;
}

RedundancyOptions redundancy_options(std::optional<std::size_t> q_card, std::optional<std::size_t> vertex_cap) {
  RedundancyOptions opts;
  opts.q_cardinality = q_card;
  if (vertex_cap) opts.vertex_cap = *vertex_cap;
  return opts;
}

py::dict channel_dict(const Channel& ch) { return to_python(channel_to_json(ch)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact partial information decomposition: redundancy, union information and related measures.";

  auto base = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  (void)base;

  py::class_<JointDistribution>(m, "Joint")
      .def_property_readonly("variables",
                             [](const JointDistribution& j) {
                               std::vector<std::pair<std::string, std::vector<std::string>>> out;
                               for (const auto& v : j.variables()) out.emplace_back(v.name(), v.labels());
                               return out;
                             })
      .def_property_readonly("num_sources", &JointDistribution::num_sources)
      .def("to_json", [](const JointDistribution& j) { return dump_distribution(from_joint(j)); })
      .def("__repr__", [](const JointDistribution& j) {
        std::string s = "<Joint";
        for (const auto& v : j.variables()) s += " " + v.name() + ":" + std::to_string(v.size());
        return s + ">";
      });

  m.def("load", [](const std::string& path) { return load_joint(path).joint; }, py::arg("path"),
        "Read and canonicalize a joint distribution file.");
  m.def("from_json", &joint_from_text, py::arg("text"), "Parse a joint distribution JSON document.");
  m.def(
      "fixture",
      [](const std::string& name, const std::string& flip) { return fixture_joint(name, parse_rational(flip)); },
      py::arg("name"), py::arg("flip") = "1/10", "Built-in example joint, canonicalized.");
  m.def("fixture_names", &fixture_names);

  m.def("entropy_bits", [](const JointDistribution& j) {
    std::vector<std::size_t> all(j.num_variables());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    return joint_entropy(j, all);
  });
  m.def("source_information", &source_information, py::arg("joint"), py::arg("source"));
  m.def("total_information", &total_information, py::arg("joint"));

  m.def(
      "redundancy",
      [](const JointDistribution& j, std::optional<std::size_t> q_card, std::optional<std::size_t> vertex_cap) {
        const auto r = redundancy_star(j, redundancy_options(q_card, vertex_cap));
        py::dict d;
        d["value"] = r.value;
        d["q_cardinality"] = r.q_cardinality;
        d["vertices_examined"] = r.vertices_examined;
        d["optimal_vertex_count"] = r.optimal_vertex_count;
        d["channel_q_given_y"] = channel_dict(r.channel_q_given_y);
        py::list per_source;
        for (const auto& ch : r.channels_q_given_x) per_source.append(channel_dict(ch));
        d["channels_q_given_x"] = per_source;
        d["caveats"] = r.caveats;
        return d;
      },
      py::arg("joint"), py::arg("q_card") = py::none(), py::arg("vertex_cap") = py::none(),
      "Redundancy I_cap* in bits with its optimal channel.");
  m.def(
      "unique",
      [](const JointDistribution& j, std::size_t source, std::optional<std::size_t> q_card,
         std::optional<std::size_t> vertex_cap) {
        return unique_information(j, source, redundancy_options(q_card, vertex_cap));
      },
      py::arg("joint"), py::arg("source"), py::arg("q_card") = py::none(), py::arg("vertex_cap") = py::none());
  m.def(
      "union",
      [](const JointDistribution& j, double tol, std::size_t max_iter) {
        const auto r = union_star(j, {tol, max_iter});
        py::dict d;
        d["value"] = r.value;
        d["fw_gap"] = r.fw_gap;
        d["iterations"] = r.iterations;
        d["optimal_coupling"] = r.optimal_coupling;
        return d;
      },
      py::arg("joint"), py::arg("tol") = 1e-7, py::arg("max_iter") = 100000,
      "Union information I_cup* in bits with its optimal coupling.");
  m.def(
      "synergy", [](const JointDistribution& j, double tol, std::size_t max_iter) {
        return synergy(j, {tol, max_iter});
      },
      py::arg("joint"), py::arg("tol") = 1e-7, py::arg("max_iter") = 100000);
  m.def(
      "excluded",
      [](const JointDistribution& j, std::size_t source, double tol, std::size_t max_iter) {
        return excluded_information(j, source, {tol, max_iter});
      },
      py::arg("joint"), py::arg("source"), py::arg("tol") = 1e-7, py::arg("max_iter") = 100000);
  m.def(
      "broja", [](const JointDistribution& j, double tol, std::size_t max_iter) {
        return broja_redundancy(j, {tol, max_iter});
      },
      py::arg("joint"), py::arg("tol") = 1e-7, py::arg("max_iter") = 100000);
  m.def("wedge", &redundancy_wedge, py::arg("joint"));
  m.def(
      "gh",
      [](const JointDistribution& j, std::optional<std::size_t> q_card, std::optional<std::size_t> vertex_cap) {
        return redundancy_gh(j, redundancy_options(q_card, vertex_cap)).value;
      },
      py::arg("joint"), py::arg("q_card") = py::none(), py::arg("vertex_cap") = py::none());
  m.def(
      "gk",
      [](const JointDistribution& pair) { return gk_common_information(pair).value; }, py::arg("pair_joint"),
      "Gacs-Korner common information of a two-variable joint.");

  m.def(
      "is_garbling",
      [](const std::string& channel_a, const std::string& channel_b) {
        const auto r = is_garbling(to_channel(parse_distribution(channel_a)), to_channel(parse_distribution(channel_b)));
        py::dict d;
        d["holds"] = r.holds;
        d["witness"] = r.witness ? py::object(channel_dict(*r.witness)) : py::object(py::none());
        return d;
      },
      py::arg("channel_a"), py::arg("channel_b"), "Exact test whether channel A is a garbling of channel B.");

  m.def(
      "decompose",
      [](const JointDistribution& j, double tol, std::size_t max_iter, std::optional<std::size_t> q_card,
         std::optional<std::size_t> vertex_cap, std::vector<std::string> measures) {
        DecomposeOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        opts.q_cardinality = q_card;
        if (vertex_cap) {
          opts.vertex_cap = *vertex_cap;
          opts.vertex_cap_source = "argument";
        }
        opts.measures = std::move(measures);
        return to_python(report_to_json(decompose(j, {}, opts)));
      },
      py::arg("joint"), py::arg("tol") = 1e-7, py::arg("max_iter") = 100000, py::arg("q_card") = py::none(),
      py::arg("vertex_cap") = py::none(), py::arg("measures") = std::vector<std::string>{},
      "Full report as a dict, the same document the command-line tool prints.");
}

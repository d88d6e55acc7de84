#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bondscope/barcode.hpp"
#include "bondscope/crystals.hpp"
#include "bondscope/errors.hpp"
#include "bondscope/ingest.hpp"
#include "bondscope/io.hpp"
#include "bondscope/stats.hpp"

namespace py = pybind11;
using namespace bondscope;

namespace {

DescriptorTag tag_of(const std::string& name) {
  if (auto tag = parse_descriptor_tag(name)) return *tag;
  throw py::value_error("unknown descriptor '" + name + "'");
}

CrystalForm form_of(const std::string& name) {
  if (auto form = parse_crystal_form(name)) return *form;
  throw py::value_error("unknown crystal form '" + name + "'");
}

ClassifyOptions options_of(unsigned threads) {
  ClassifyOptions o;
  o.threads = threads;
  return o;
}

std::vector<std::pair<int, int>> intervals(const Barcode& bc) {
  std::vector<std::pair<int, int>> out;
  for (const auto& iv : bc.intervals) out.emplace_back(iv.lo, iv.hi);
  return out;
}

}  // namespace

PYBIND11_MODULE(_bondscope, m) {
  m.doc() = "Topological classification of local atomic environments";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<MappingError>(m, "MappingError", PyExc_ValueError);
  py::register_exception<MinimumImageError>(m, "MinimumImageError", PyExc_ValueError);
  py::register_exception<TooLargeError>(m, "TooLargeError", PyExc_ValueError);
  py::register_exception<NotPerfectlyCoordinatedError>(m, "NotPerfectlyCoordinatedError",
                                                       PyExc_ValueError);
  py::register_exception<UndefinedUncertaintyError>(m, "UndefinedUncertaintyError",
                                                    PyExc_ArithmeticError);

  py::class_<BondNetwork>(m, "BondNetwork")
      .def(py::init([](const std::vector<std::string>& species,
                       const std::vector<std::pair<AtomId, AtomId>>& bonds) {
             std::vector<Bond> b;
             for (auto [x, y] : bonds) b.push_back({x, y});
             return BondNetwork(species, std::move(b));
           }),
           py::arg("species"), py::arg("bonds"))
      .def_property_readonly("atom_count", &BondNetwork::atom_count)
      .def_property_readonly("bond_count", &BondNetwork::bond_count)
      .def_property_readonly("species",
                             [](const BondNetwork& n) {
                               std::vector<std::string> out;
                               for (AtomId a = 0; a < n.atom_count(); ++a) out.push_back(n.species_label(a));
                               return out;
                             })
      .def_property_readonly("bonds",
                             [](const BondNetwork& n) {
                               std::vector<std::pair<AtomId, AtomId>> out;
                               for (const auto& b : n.bonds()) out.emplace_back(b.a, b.b);
                               return out;
                             })
      .def("degree", &BondNetwork::degree)
      .def("to_json", &network_to_json)
      .def_static("from_json", &network_from_json)
      .def("__repr__", [](const BondNetwork& n) {
        return "<BondNetwork " + std::to_string(n.atom_count()) + " atoms, " +
               std::to_string(n.bond_count()) + " bonds>";
      });

  py::class_<EmpiricalDistribution>(m, "Distribution")
      .def_property_readonly("descriptor",
                             [](const EmpiricalDistribution& d) { return std::string(to_string(d.tag())); })
      .def_property_readonly("radius", &EmpiricalDistribution::radius)
      .def_property_readonly("total", &EmpiricalDistribution::total)
      .def_property_readonly("class_count", &EmpiricalDistribution::class_count)
      .def("counts",
           [](const EmpiricalDistribution& d) {
             py::dict out;
             for (const auto& [k, c] : d.counts()) out[py::bytes(k)] = c;
             return out;
           },
           "Payload bytes -> count.")
      .def("classes",
           [](const EmpiricalDistribution& d) {
             std::vector<std::pair<std::string, std::uint64_t>> out;
             for (const auto& [k, c] : d.counts()) out.emplace_back(render_payload(d.tag(), k), c);
             return out;
           },
           "(rendering, count) in payload order.")
      .def("to_json", &distribution_to_json)
      .def_static("from_json", [](const std::string& text) { return distribution_from_json(text); })
      .def(py::self == py::self);

  m.def("generate_crystal", [](const std::string& form, int n) { return generate_crystal(form_of(form), n); },
        py::arg("form"), py::arg("n"));
  m.def("bond_switch",
        [](const BondNetwork& net, std::size_t switches, std::uint64_t seed) {
          return bond_switch(net, switches, seed);
        },
        py::arg("network"), py::arg("switches"), py::arg("seed"));
  m.def("load",
        [](const std::filesystem::path& path, const std::string& bond, const std::string& species_map,
           unsigned threads) {
          LoadOptions o;
          if (!bond.empty()) o.rule = BondRule::parse(bond);
          if (!species_map.empty()) o.species_map = parse_species_map(species_map);
          o.threads = threads;
          return load_networks(path, o);
        },
        py::arg("path"), py::arg("bond") = "", py::arg("species_map") = "", py::arg("threads") = 1,
        "One bond network per frame.");

  m.def("classify",
        [](const BondNetwork& net, const std::string& descriptor, int radius, const std::string& root_species,
           unsigned threads) {
          const auto tag = tag_of(descriptor);
          py::gil_scoped_release release;
          return classify_all(net, tag, radius, species_filter(root_species), options_of(threads));
        },
        py::arg("network"), py::arg("descriptor"), py::arg("radius"), py::arg("root_species") = "",
        py::arg("threads") = 1);

  m.def("h1_barcode",
        [](const BondNetwork& net, AtomId root, int radius) {
          return intervals(h1_barcode(extract_environment(net, root, radius)));
        },
        py::arg("network"), py::arg("root"), py::arg("radius"));
  m.def("shell_count",
        [](const BondNetwork& net, AtomId root, int radius) {
          return shell_count(extract_environment(net, root, radius)).counts;
        },
        py::arg("network"), py::arg("root"), py::arg("radius"));
  m.def("primitive_rings",
        [](const BondNetwork& net, AtomId root, int radius) {
          return primitive_rings_through(extract_environment(net, root, radius)).lengths;
        },
        py::arg("network"), py::arg("root"), py::arg("radius"));
  m.def("endpoints_from_shell_count",
        [](const std::vector<int>& counts) { return endpoints_from_shell_count(ShellCount{counts}); });

  m.def("shannon_entropy", &shannon_entropy);
  m.def("scaled_entropy", &scaled_entropy);
  m.def("symmetrized_kl", &symmetrized_kl, py::arg("p"), py::arg("q"), py::arg("smoothing") = 0.0);
  m.def("uncertainty_coefficient",
        [](const BondNetwork& net, const std::string& x, const std::string& y, int radius_x, int radius_y,
           const std::string& root_species) {
          const auto roots = select_roots(net, species_filter(root_species));
          const auto a = classify_roots(net, roots, tag_of(x), radius_x);
          const auto b = classify_roots(net, roots, tag_of(y), radius_y);
          return uncertainty_coefficient(JointDistribution::from_keys(a, b));
        },
        py::arg("network"), py::arg("x"), py::arg("y"), py::arg("radius_x"), py::arg("radius_y"),
        py::arg("root_species") = "",
        "U(X|Y) over the selected roots.");
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "akg/error.hpp"
#include "akg/fuzzy_context.hpp"
#include "akg/ingest.hpp"
#include "akg/lattice.hpp"
#include "akg/match_rank.hpp"
#include "akg/relatedness.hpp"

namespace py = pybind11;

namespace {

// Lattice plus the context it indexes, so Python sees names instead of bit positions.
struct PyLattice {
    akg::ConceptLattice lattice;
    akg::FuzzyContext context;

    py::dict concept_dict(akg::ConceptId id) const {
        const auto& c = lattice.concept_at(id);
        py::dict d;
        d["id"] = c.id;
        d["intent"] = lattice.intent_names(id, context);
        d["extent"] = lattice.extent_memberships(id, context);
        d["support"] = c.support;
        return d;
    }
};

akg::RelatednessFunction rel_fn(const std::string& name, double threshold) {
    return akg::make_relatedness(name, threshold);
}

}  // namespace

PYBIND11_MODULE(_akg, m) {
    m.doc() = "Fuzzy concept lattice construction and F-measure ticket matching";

    py::register_exception<akg::Error>(m, "AkgError", PyExc_ValueError);

    py::class_<akg::FuzzyContext>(m, "FuzzyContext")
        .def(py::init<double>(), py::arg("chi") = akg::kDefaultChi)
        .def_property("chi", &akg::FuzzyContext::chi, &akg::FuzzyContext::set_chi)
        .def("add_object",
             [](akg::FuzzyContext& ctx, const std::string& name, const akg::MembershipMap& memberships) {
                 ctx.add_object({name, akg::ObjectKind::ticket}, memberships);
             })
        .def_property_readonly("objects",
                               [](const akg::FuzzyContext& ctx) {
                                   std::vector<std::string> names;
                                   for (const auto& o : ctx.objects()) names.push_back(o.name);
                                   return names;
                               })
        .def_property_readonly("attributes",
                               [](const akg::FuzzyContext& ctx) {
                                   std::vector<std::string> names;
                                   for (const auto& a : ctx.attributes()) names.push_back(a.name);
                                   return names;
                               })
        .def("membership", py::overload_cast<std::string_view, std::string_view>(&akg::FuzzyContext::membership, py::const_))
        .def("derive_intent",
             py::overload_cast<const std::set<std::string>&>(&akg::FuzzyContext::derive_intent, py::const_))
        .def("derive_extent",
             py::overload_cast<const std::set<std::string>&>(&akg::FuzzyContext::derive_extent, py::const_))
        .def("representation",
             [](const akg::FuzzyContext& ctx, const std::string& name) {
                 return ctx.object_representation(name).memberships;
             })
        .def("to_json", [](const akg::FuzzyContext& ctx) { return akg::to_json(ctx).dump(); })
        .def_static("from_json",
                    [](const std::string& text) { return akg::context_from_json(nlohmann::json::parse(text)); });

    py::class_<PyLattice>(m, "ConceptLattice")
        .def("__len__", [](const PyLattice& l) { return l.lattice.size(); })
        .def_property_readonly("top", [](const PyLattice& l) { return l.lattice.top(); })
        .def_property_readonly("bottom", [](const PyLattice& l) { return l.lattice.bottom(); })
        .def("concept", &PyLattice::concept_dict)
        .def("concepts",
             [](const PyLattice& l) {
                 py::list out;
                 for (const auto& c : l.lattice.concepts()) out.append(l.concept_dict(c.id));
                 return out;
             })
        .def("support", [](const PyLattice& l, akg::ConceptId id) { return l.lattice.support(id); })
        .def("frequent_concepts", [](const PyLattice& l, double minsupp) { return l.lattice.frequent_concepts(minsupp); })
        .def("is_subconcept",
             [](const PyLattice& l, akg::ConceptId sub, akg::ConceptId super) { return l.lattice.is_subconcept(sub, super); })
        .def("traverse_top_down", [](const PyLattice& l) { return l.lattice.traverse_top_down(); })
        .def("covers", [](const PyLattice& l) { return l.lattice.cover_edges(); })
        .def("to_dot", [](const PyLattice& l) { return akg::to_dot(l.lattice, l.context); });

    m.def(
        "build_lattice",
        [](const akg::FuzzyContext& ctx, unsigned threads) { return PyLattice{akg::build_lattice(ctx, {threads}), ctx}; },
        py::arg("context"), py::arg("threads") = 1);

    m.def(
        "insert_object_incremental",
        [](const PyLattice& l, const std::string& name, const akg::MembershipMap& memberships) {
            auto r = akg::insert_object_incremental(l.lattice, l.context, {name, akg::ObjectKind::ticket}, memberships);
            return PyLattice{std::move(r.lattice), std::move(r.context)};
        },
        py::arg("lattice"), py::arg("name"), py::arg("memberships"));

    py::class_<akg::FeatureSet>(m, "FeatureSet")
        .def(py::init([](const std::vector<std::string>& features) { return akg::FeatureSet(features); }))
        .def_property_readonly("features", &akg::FeatureSet::features)
        .def("__len__", &akg::FeatureSet::size);

    m.def(
        "relatedness",
        [](const std::string& x, const std::string& y, const std::string& fn, double threshold) {
            return akg::relatedness(x, y, rel_fn(fn, threshold));
        },
        py::arg("feature"), py::arg("attribute"), py::arg("function") = "token-overlap",
        py::arg("threshold") = akg::kDefaultRelatednessThreshold);

    m.def(
        "intersection_size",
        [](const std::vector<std::string>& features, const std::vector<std::string>& intent, const std::string& fn) {
            auto r = akg::intersection_size(akg::FeatureSet(features), intent, rel_fn(fn, akg::kDefaultRelatednessThreshold));
            std::vector<std::pair<std::string, std::string>> pairs;
            for (const auto& p : r.matching) pairs.emplace_back(p.feature, p.attribute);
            return py::make_tuple(r.count, pairs);
        },
        py::arg("features"), py::arg("intent"), py::arg("function") = "token-overlap");

    m.def(
        "rank_concepts",
        [](const PyLattice& l, const std::vector<std::string>& features, std::size_t limit, const std::string& fn) {
            akg::RankOptions opts;
            opts.limit = limit;
            py::list out;
            for (const auto& s : akg::rank_concepts(l.lattice, l.context, akg::FeatureSet(features),
                                                    rel_fn(fn, akg::kDefaultRelatednessThreshold), opts)) {
                py::dict d;
                d["concept"] = s.concept_id;
                d["intent"] = l.lattice.intent_names(s.concept_id, l.context);
                d["precision"] = s.precision;
                d["recall"] = s.recall;
                d["f_measure"] = s.f_measure;
                out.append(d);
            }
            return out;
        },
        py::arg("lattice"), py::arg("features"), py::arg("limit") = 10, py::arg("function") = "token-overlap");

    m.def(
        "recommend",
        [](const PyLattice& l, const std::vector<std::string>& features, std::size_t k, const std::string& fn) {
            py::list out;
            for (const auto& h : akg::recommend(l.lattice, l.context, akg::FeatureSet(features),
                                                rel_fn(fn, akg::kDefaultRelatednessThreshold), k)) {
                py::dict d;
                d["object"] = h.object;
                d["concept"] = h.concept_id;
                d["f_measure"] = h.f_measure;
                d["membership"] = h.membership;
                d["score"] = h.score;
                out.append(d);
            }
            return out;
        },
        py::arg("lattice"), py::arg("features"), py::arg("k") = 10, py::arg("function") = "token-overlap");

    py::class_<akg::Ticket>(m, "Ticket")
        .def(py::init([](std::string customer, std::string description, std::string configuration,
                         std::string timestamp, std::string location, std::string id) {
                 return akg::Ticket{std::move(id), std::move(customer), std::move(description),
                                    std::move(configuration), std::move(timestamp), std::move(location)};
             }),
             py::arg("customer"), py::arg("problem_description"), py::arg("configuration"), py::arg("timestamp"),
             py::arg("location") = "", py::arg("id") = "")
        .def_readwrite("id", &akg::Ticket::id)
        .def_readwrite("customer", &akg::Ticket::customer)
        .def_readwrite("problem_description", &akg::Ticket::problem_description)
        .def_readwrite("configuration", &akg::Ticket::configuration)
        .def_readwrite("timestamp", &akg::Ticket::timestamp)
        .def_readwrite("location", &akg::Ticket::location);

    py::class_<akg::TaxonomyDictionary>(m, "TaxonomyDictionary")
        .def(py::init<>())
        .def("add",
             [](akg::TaxonomyDictionary& d, const std::string& phrase, const std::string& attribute, double confidence) {
                 d.add(phrase, {attribute, confidence, akg::AttributeKind::symptom});
             },
             py::arg("phrase"), py::arg("attribute"), py::arg("confidence") = 1.0)
        .def("__len__", &akg::TaxonomyDictionary::size)
        .def_static("load", [](const std::filesystem::path& p) { return akg::TaxonomyDictionary::load(p); });

    m.def(
        "extract_features",
        [](const akg::Ticket& t, const akg::TaxonomyDictionary& d, const std::string& strategy) {
            return akg::extract_features(t, d, akg::StrategyPreset(akg::parse_strategy(strategy))).features();
        },
        py::arg("ticket"), py::arg("dictionary"), py::arg("strategy") = "reactive");

    m.def(
        "load_dataset",
        [](const std::filesystem::path& p) {
            auto r = akg::load_dataset(p);
            std::vector<std::pair<std::size_t, std::string>> errors;
            for (const auto& e : r.errors) errors.emplace_back(e.line, e.message);
            return py::make_tuple(r.tickets, errors);
        },
        py::arg("path"));

    m.def(
        "build_context",
        [](const std::vector<akg::Ticket>& tickets, const akg::TaxonomyDictionary& d, const std::string& strategy,
           double chi) { return akg::build_context(tickets, d, akg::StrategyPreset(akg::parse_strategy(strategy)), chi); },
        py::arg("tickets"), py::arg("dictionary"), py::arg("strategy") = "reactive", py::arg("chi") = akg::kDefaultChi);
}

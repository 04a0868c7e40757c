#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "antids/classifier.hpp"
#include "antids/dataset.hpp"
#include "antids/engine.hpp"
#include "antids/errors.hpp"
#include "antids/experiment.hpp"
#include "antids/export.hpp"
#include "antids/kernel.hpp"

namespace py = pybind11;
using namespace antids;

namespace {

using Pos = std::pair<int, int>;

GridCoord to_coord(Pos p) { return {p.first, p.second}; }

std::vector<Item> to_items(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
                           const std::vector<bool>& is_marker) {
    if (!labels.empty() && labels.size() != features.size()) throw ConfigError("labels must match features");
    if (!is_marker.empty() && is_marker.size() != features.size()) throw ConfigError("is_marker must match features");
    std::vector<Item> items;
    for (std::size_t i = 0; i < features.size(); ++i) {
        Item it{ItemId{static_cast<std::uint32_t>(i)}, features[i], Role::test, std::nullopt};
        if (!labels.empty() && labels[i] != 0) it.true_class = class_from_int(labels[i]);
        if (!is_marker.empty() && is_marker[i]) it.role = Role::marker;
        items.push_back(std::move(it));
    }
    return items;
}

// Stepwise access to one colony run.
class Simulation {
public:
    Simulation(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
               std::optional<Pos> grid, std::optional<std::size_t> n_ants, std::uint64_t seed, std::uint64_t t_max,
               const KernelParams& kernel)
        : state_(make(features, labels, grid, n_ants, seed, t_max, kernel)) {}

    void advance(std::uint64_t steps) {
        py::gil_scoped_release release;
        for (std::uint64_t i = 0; i < steps; ++i) step(state_);
    }
    void finalize() { finalize_positions(state_); }
    std::uint64_t t() const { return state_.t; }
    Pos dims() const { return {state_.grid.width(), state_.grid.height()}; }
    double entropy(int patch_side) const { return take_snapshot(state_, patch_side).entropy; }
    std::vector<std::optional<Pos>> positions() const {
        std::vector<std::optional<Pos>> out;
        for (const auto& loc : state_.locations) {
            if (const auto* c = std::get_if<GridCoord>(&loc)) out.emplace_back(Pos{c->x, c->y});
            else out.emplace_back(std::nullopt);
        }
        return out;
    }
    std::vector<Pos> ant_positions() const {
        std::vector<Pos> out;
        for (const auto& a : state_.ants) out.emplace_back(a.pos.x, a.pos.y);
        return out;
    }
    std::vector<double> pheromone() const {
        const auto f = state_.grid.pheromone_field();
        return {f.begin(), f.end()};
    }
    void check() const { check_invariants(state_); }

private:
    static SimState make(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
                         std::optional<Pos> grid, std::optional<std::size_t> n_ants, std::uint64_t seed,
                         std::uint64_t t_max, const KernelParams& kernel) {
        auto items = to_items(features, labels, {});
        std::optional<GridDims> dims;
        if (grid) dims = GridDims{grid->first, grid->second};
        InitOptions opt;
        opt.n_ants = n_ants;
        opt.seed = seed;
        opt.params.kernel = kernel;
        opt.params.t_max = t_max;
        opt.params.validate();
        return init_run(std::move(items), create_grid(features.size(), dims), opt);
    }

    SimState state_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ant-colony clustering and k-NN intrusion classification";

    auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
    (void)config_error;

    py::class_<KernelParams>(m, "KernelParams")
        .def(py::init<>())
        .def_readwrite("beta", &KernelParams::beta)
        .def_readwrite("sensory", &KernelParams::sensory)
        .def_readwrite("k1", &KernelParams::k1)
        .def_readwrite("k2", &KernelParams::k2)
        .def_readwrite("theta_items", &KernelParams::theta_items)
        .def_readwrite("steepness", &KernelParams::steepness)
        .def_readwrite("eta", &KernelParams::eta)
        .def_readwrite("alpha", &KernelParams::alpha)
        .def_readwrite("evap", &KernelParams::evap)
        .def_readwrite("direction_falloff", &KernelParams::direction_falloff)
        .def("validate", &KernelParams::validate);

    m.def("pheromone_weight", &pheromone_weight, py::arg("sigma"), py::arg("params") = KernelParams{});
    m.def("direction_weight", &direction_weight, py::arg("turn_degrees"), py::arg("params") = KernelParams{});
    m.def("crowding", &crowding, py::arg("n"), py::arg("params") = KernelParams{});
    m.def("pick_probability", &pick_probability, py::arg("n"), py::arg("d"), py::arg("params") = KernelParams{});
    m.def("drop_probability", &drop_probability, py::arg("n"), py::arg("d"), py::arg("params") = KernelParams{});
    m.def(
        "normalized_distance",
        [](const std::vector<double>& a, const std::vector<double>& b) { return normalized_distance(a, b); },
        py::arg("a"), py::arg("b"));
    m.def(
        "transition_distribution",
        [](const std::vector<std::pair<double, int>>& candidates, const KernelParams& params) {
            std::vector<MoveCandidate> c;
            for (const auto& [s, turn] : candidates) c.push_back({{}, s, turn});
            return transition_distribution(c, params);
        },
        py::arg("candidates"), py::arg("params") = KernelParams{},
        "candidates: list of (pheromone, turn_degrees)");

    m.def(
        "toroidal_distance",
        [](Pos a, Pos b, Pos dims) { return toroidal_distance(to_coord(a), to_coord(b), {dims.first, dims.second}); },
        py::arg("a"), py::arg("b"), py::arg("dims"));
    m.def(
        "grid_side", [](std::size_t n) { return create_grid(n).width(); }, py::arg("n_items"));

    m.def(
        "generate_synthetic",
        [](int classes, int per_class, int features, double spread, int markers_per_class, std::uint64_t seed) {
            SyntheticSpec spec{classes, per_class, features, 0.5, spread, markers_per_class, seed};
            const auto items = generate_synthetic(spec);
            py::list out;
            for (const auto& it : items) {
                py::dict d;
                d["features"] = it.features;
                d["label"] = to_int(*it.true_class);
                d["marker"] = it.role == Role::marker;
                out.append(d);
            }
            return out;
        },
        py::arg("classes") = 4, py::arg("per_class") = 200, py::arg("features") = 2, py::arg("spread") = 0.06,
        py::arg("markers_per_class") = 100, py::arg("seed") = 1);

    m.def(
        "knn_classify",
        [](const std::vector<Pos>& tests, const std::vector<std::tuple<std::uint32_t, int, int, int>>& markers, int k,
           Pos dims) {
            std::vector<GridCoord> t;
            for (const auto& p : tests) t.push_back(to_coord(p));
            std::vector<Marker> ms;
            for (const auto& [id, x, y, label] : markers) ms.push_back({ItemId{id}, {x, y}, class_from_int(label)});
            std::vector<int> out;
            for (auto c : knn_classify(t, ms, k, {dims.first, dims.second})) out.push_back(to_int(c));
            return out;
        },
        py::arg("tests"), py::arg("markers"), py::arg("k"), py::arg("dims"),
        "markers: list of (id, x, y, label)");

    m.def(
        "evaluate",
        [](const std::vector<int>& predictions, const std::vector<int>& truths) {
            std::vector<ClassLabel> p, t;
            for (int v : predictions) p.push_back(class_from_int(v));
            for (int v : truths) t.push_back(class_from_int(v));
            const auto r = evaluate(p, t);
            py::dict d;
            std::vector<std::vector<std::uint64_t>> confusion;
            for (const auto& row : r.confusion) confusion.emplace_back(row.begin(), row.end());
            d["confusion"] = confusion;
            std::vector<std::optional<double>> acc(r.per_class_accuracy.begin(), r.per_class_accuracy.end());
            d["per_class_accuracy"] = acc;
            d["overall_accuracy"] = r.overall_accuracy;
            d["n_test"] = r.n_test;
            return d;
        },
        py::arg("predictions"), py::arg("truths"));

    m.def(
        "spatial_entropy",
        [](const std::vector<std::pair<Pos, int>>& items, Pos dims, int patch_side) {
            Snapshot s;
            s.dims = {dims.first, dims.second};
            std::uint32_t id = 0;
            for (const auto& [p, label] : items) {
                s.placements.push_back({ItemId{id++}, to_coord(p), Role::marker, class_from_int(label)});
            }
            return spatial_entropy(s, patch_side);
        },
        py::arg("items"), py::arg("dims"), py::arg("patch_side") = kDefaultPatchSide,
        "items: list of ((x, y), label)");

    m.def(
        "run_synthetic_json",
        [](std::uint64_t seed, std::uint64_t steps, int classes, int per_class, int markers_per_class, double spread,
           std::optional<std::size_t> n_ants, std::optional<Pos> grid, int k) {
            ExperimentConfig c;
            c.seed = seed;
            c.run.t_max = steps;
            c.synthetic.classes = classes;
            c.synthetic.per_class = per_class;
            c.synthetic.markers_per_class = markers_per_class;
            c.synthetic.spread = spread;
            c.synthetic.seed = seed;
            c.n_ants = n_ants;
            if (grid) c.grid = GridDims{grid->first, grid->second};
            c.k = k;
            c.validate();
            RunReport r;
            {
                py::gil_scoped_release release;
                r = run_synthetic(c);
            }
            return report_json(r);
        },
        py::arg("seed") = 1, py::arg("steps") = 100000, py::arg("classes") = 4, py::arg("per_class") = 200,
        py::arg("markers_per_class") = 100, py::arg("spread") = 0.06, py::arg("n_ants") = py::none(),
        py::arg("grid") = py::none(), py::arg("k") = 3);

    py::class_<Simulation>(m, "Simulation")
        .def(py::init<const std::vector<std::vector<double>>&, const std::vector<int>&, std::optional<Pos>,
                      std::optional<std::size_t>, std::uint64_t, std::uint64_t, const KernelParams&>(),
             py::arg("features"), py::arg("labels") = std::vector<int>{}, py::arg("grid") = py::none(),
             py::arg("n_ants") = py::none(), py::arg("seed") = 0, py::arg("t_max") = 1000000,
             py::arg("params") = KernelParams{})
        .def("step", &Simulation::advance, py::arg("steps") = 1)
        .def("finalize", &Simulation::finalize)
        .def_property_readonly("t", &Simulation::t)
        .def_property_readonly("dims", &Simulation::dims)
        .def("entropy", &Simulation::entropy, py::arg("patch_side") = kDefaultPatchSide)
        .def("positions", &Simulation::positions)
        .def("ant_positions", &Simulation::ant_positions)
        .def("pheromone", &Simulation::pheromone)
        .def("check_invariants", &Simulation::check);
}

#include "igabem/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "igabem/error.hpp"

namespace igabem {

namespace {

using nlohmann::json;

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
    if (!obj.is_object()) {
        throw ParseError(ptr, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(child(ptr, key), "missing required key");
    }
    return *it;
}

const json* optional(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& ptr) {
    if (!j.is_number()) {
        throw ParseError(ptr, "expected a number");
    }
    return j.get<double>();
}

int as_int(const json& j, const std::string& ptr) {
    if (!j.is_number_integer()) {
        throw ParseError(ptr, "expected an integer");
    }
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& ptr) {
    if (!j.is_boolean()) {
        throw ParseError(ptr, "expected true or false");
    }
    return j.get<bool>();
}

const json& as_array(const json& j, const std::string& ptr) {
    if (!j.is_array()) {
        throw ParseError(ptr, "expected an array");
    }
    return j;
}

std::vector<double> numbers(const json& j, const std::string& ptr) {
    std::vector<double> out;
    const json& arr = as_array(j, ptr);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(as_number(arr[i], child(ptr, i)));
    }
    return out;
}

template <int N>
std::vector<Eigen::Matrix<double, N, 1>> points(const json& j, const std::string& ptr) {
    std::vector<Eigen::Matrix<double, N, 1>> out;
    const json& arr = as_array(j, ptr);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::vector<double> c = numbers(arr[i], child(ptr, i));
        if (static_cast<int>(c.size()) != N) {
            throw ParseError(child(ptr, i), fmt::format("expected {} coordinates", N));
        }
        Eigen::Matrix<double, N, 1> p;
        for (int k = 0; k < N; ++k) {
            p[k] = c[k];
        }
        out.push_back(p);
    }
    return out;
}

int axis_from(const json& j, const std::string& ptr) {
    if (j.is_number_integer()) {
        const int a = j.get<int>();
        if (a >= 0 && a < 3) {
            return a;
        }
    } else if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "x") return 0;
        if (s == "y") return 1;
        if (s == "z") return 2;
    }
    throw ParseError(ptr, "expected a component x, y, z (or 0, 1, 2)");
}

const char* axis_name(int a) { return a == 0 ? "x" : a == 1 ? "y" : "z"; }

BasisSpace space_from(const json& obj, const std::string& degree_key, const std::string& knots_key,
                      const std::string& ptr) {
    const int degree = as_int(require(obj, degree_key, ptr), child(ptr, degree_key));
    std::vector<double> knots = numbers(require(obj, knots_key, ptr), child(ptr, knots_key));
    try {
        return BasisSpace(KnotVector(std::move(knots)), degree);
    } catch (const Error& e) {
        throw ParseError(child(ptr, knots_key), e.what());
    }
}

TrimmingCurve curve_from(const json& obj, const std::string& ptr) {
    BasisSpace space = space_from(obj, "degree", "knots", ptr);
    auto pts = points<2>(require(obj, "control_points", ptr), child(ptr, "control_points"));
    try {
        return TrimmingCurve(std::move(space), std::move(pts));
    } catch (const Error& e) {
        throw ParseError(ptr, e.what());
    }
}

BoundaryPatch patch_from(const json& obj, int default_order, const std::string& ptr) {
    if (!obj.is_object()) {
        throw ParseError(ptr, "expected an object");
    }
    BasisSpace su = space_from(obj, "degree_u", "knots_u", ptr);
    BasisSpace sv = space_from(obj, "degree_v", "knots_v", ptr);
    auto cps = points<3>(require(obj, "control_points", ptr), child(ptr, "control_points"));
    std::vector<double> weights = numbers(require(obj, "weights", ptr), child(ptr, "weights"));
    const bool flip = optional(obj, "flip_normal")
                          ? as_bool(obj["flip_normal"], child(ptr, "flip_normal"))
                          : false;

    BoundaryPatch patch;
    try {
        NurbsPatch base(std::move(su), std::move(sv), std::move(cps), std::move(weights));
        if (const json* trim = optional(obj, "trim")) {
            const std::string tptr = child(ptr, "trim");
            const json& curves = as_array(require(*trim, "curves", tptr), child(tptr, "curves"));
            if (curves.size() != 2) {
                throw ParseError(child(tptr, "curves"),
                                 fmt::format("exactly two trimming curves required, got {}",
                                             curves.size()));
            }
            TrimmingCurve first = curve_from(curves[0], child(child(tptr, "curves"), 0));
            TrimmingCurve second = curve_from(curves[1], child(child(tptr, "curves"), 1));
            patch.surface = Surface(TrimmedPatch(std::move(base), std::move(first),
                                                 std::move(second)),
                                    flip);
        } else {
            patch.surface = Surface(std::move(base), flip);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(ptr, e.what());
    }

    if (const json* field = optional(obj, "field")) {
        const std::string fptr = child(ptr, "field");
        const bool has_knots = optional(*field, "knots_u") || optional(*field, "knots_v");
        if (has_knots) {
            patch.field.u = space_from(*field, "degree_u", "knots_u", fptr);
            patch.field.v = space_from(*field, "degree_v", "knots_v", fptr);
            if (patch.field.u.first() != 0.0 || patch.field.u.last() != 1.0 ||
                patch.field.v.first() != 0.0 || patch.field.v.last() != 1.0) {
                throw ParseError(fptr, "field knot vectors must span [0, 1]");
            }
        } else {
            const int du = as_int(require(*field, "degree_u", fptr), child(fptr, "degree_u"));
            const int dv = as_int(require(*field, "degree_v", fptr), child(fptr, "degree_v"));
            if (du < 1 || dv < 1) {
                throw ParseError(fptr, "field degrees must be at least 1");
            }
            patch.field.u = BasisSpace(KnotVector::open_uniform(du, 1), du);
            patch.field.v = BasisSpace(KnotVector::open_uniform(dv, 1), dv);
        }
        if (patch.field.u.degree() < 1 || patch.field.v.degree() < 1) {
            throw ParseError(fptr, "field degrees must be at least 1");
        }
    } else {
        patch.field = single_span_field(default_order);
    }

    if (const json* sub = optional(obj, "subdivision")) {
        const std::string sptr = child(ptr, "subdivision");
        if (const json* u = optional(*sub, "u")) {
            patch.extra_lines_u = numbers(*u, child(sptr, "u"));
        }
        if (const json* v = optional(*sub, "v")) {
            patch.extra_lines_v = numbers(*v, child(sptr, "v"));
        }
    }
    return patch;
}

BoundaryModel model_from(const json& root) {
    if (!root.is_object()) {
        throw ParseError("", "model must be a JSON object");
    }
    BoundaryModel model;

    const json& mat = require(root, "material", "");
    try {
        model.material = Material(
            as_number(require(mat, "youngs_modulus", "/material"), "/material/youngs_modulus"),
            as_number(require(mat, "poisson_ratio", "/material"), "/material/poisson_ratio"));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError("/material", e.what());
    }

    if (const json* vs = optional(root, "virgin_stress")) {
        const std::vector<double> s = numbers(*vs, "/virgin_stress");
        if (s.size() != 6) {
            throw ParseError("/virgin_stress", "expected (sxx, syy, szz, sxy, syz, szx)");
        }
        std::copy(s.begin(), s.end(), model.load.virgin_stress.begin());
    }

    if (const json* d = optional(root, "domain")) {
        const std::string s = d->is_string() ? d->get<std::string>() : "";
        if (s == "interior") {
            model.domain = DomainKind::interior;
        } else if (s == "exterior") {
            model.domain = DomainKind::exterior;
        } else {
            throw ParseError("/domain", "expected \"interior\" or \"exterior\"");
        }
    }

    if (const json* planes = optional(root, "symmetry_planes")) {
        const json& arr = as_array(*planes, "/symmetry_planes");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string s = arr[i].is_string() ? arr[i].get<std::string>() : "";
            SymmetryPlane p;
            if (s == "xy") {
                p = SymmetryPlane::xy;
            } else if (s == "yz") {
                p = SymmetryPlane::yz;
            } else if (s == "zx" || s == "xz") {
                p = SymmetryPlane::zx;
            } else {
                throw ParseError(child("/symmetry_planes", i), "expected \"xy\", \"yz\" or \"zx\"");
            }
            if (std::find(model.symmetry_planes.begin(), model.symmetry_planes.end(), p) !=
                model.symmetry_planes.end()) {
                throw ParseError(child("/symmetry_planes", i), "duplicate symmetry plane");
            }
            model.symmetry_planes.push_back(p);
        }
    }

    if (const json* cfg = optional(root, "config")) {
        auto& c = model.config;
        if (const json* v = optional(*cfg, "gauss_order")) {
            c.gauss_order = as_int(*v, "/config/gauss_order");
            if (c.gauss_order < 1 || c.gauss_order > 64) {
                throw ParseError("/config/gauss_order", "must lie in [1, 64]");
            }
        }
        if (const json* v = optional(*cfg, "quadtree_threshold")) {
            c.quadtree_threshold = as_number(*v, "/config/quadtree_threshold");
            if (!(c.quadtree_threshold > 0.0)) {
                throw ParseError("/config/quadtree_threshold", "must be positive");
            }
        }
        if (const json* v = optional(*cfg, "quadtree_max_depth")) {
            c.quadtree_max_depth = as_int(*v, "/config/quadtree_max_depth");
            if (c.quadtree_max_depth < 0) {
                throw ParseError("/config/quadtree_max_depth", "must be non-negative");
            }
        }
        if (const json* v = optional(*cfg, "merge_tol")) {
            c.merge_tol = as_number(*v, "/config/merge_tol");
            if (!(*c.merge_tol > 0.0)) {
                throw ParseError("/config/merge_tol", "must be positive");
            }
        }
        if (const json* v = optional(*cfg, "excavation_sign")) {
            c.excavation_sign = as_bool(*v, "/config/excavation_sign");
        }
        if (const json* v = optional(*cfg, "threads")) {
            c.threads = as_int(*v, "/config/threads");
        }
    }

    int default_order = 2;
    if (const json* fo = optional(root, "field_order")) {
        default_order = as_int(*fo, "/field_order");
        if (default_order < 1) {
            throw ParseError("/field_order", "must be at least 1");
        }
    }

    const json& patches = as_array(require(root, "patches", ""), "/patches");
    if (patches.empty()) {
        throw ParseError("/patches", "at least one patch required");
    }
    for (std::size_t i = 0; i < patches.size(); ++i) {
        model.patches.push_back(patch_from(patches[i], default_order, child("/patches", i)));
    }

    if (const json* pr = optional(root, "probe")) {
        Probe p;
        p.patch = as_int(require(*pr, "patch", "/probe"), "/probe/patch");
        p.s = as_number(require(*pr, "s", "/probe"), "/probe/s");
        p.t = as_number(require(*pr, "t", "/probe"), "/probe/t");
        if (const json* c = optional(*pr, "component")) {
            p.component = axis_from(*c, "/probe/component");
        }
        if (p.patch < 0 || p.patch >= static_cast<int>(model.patches.size())) {
            throw ParseError("/probe/patch", "unknown patch");
        }
        if (p.s < 0 || p.s > 1 || p.t < 0 || p.t > 1) {
            throw ParseError("/probe", "probe parameters must lie in [0, 1]");
        }
        model.probe = p;
    }
    return model;
}

json space_json(const BasisSpace& s) { return s.knots().values(); }

json curve_json(const TrimmingCurve& c) {
    json pts = json::array();
    for (const auto& p : c.control_points()) {
        pts.push_back({p.x(), p.y()});
    }
    return {{"degree", c.space().degree()},
            {"knots", space_json(c.space())},
            {"control_points", pts}};
}

Eigen::Vector2d curve_parameter_point(TraceCurve curve, double x) {
    switch (curve) {
        case TraceCurve::first_trim:
        case TraceCurve::edge_s0: return {0.0, x};
        case TraceCurve::second_trim:
        case TraceCurve::edge_s1: return {1.0, x};
        case TraceCurve::edge_t0: return {x, 0.0};
        case TraceCurve::edge_t1: return {x, 1.0};
    }
    return {0.0, x};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot open {} for writing", path.string()));
    }
    return out;
}

}  // namespace

BoundaryModel parse_model_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", fmt::format("invalid JSON: {}", e.what()));
    }
    return model_from(root);
}

BoundaryModel parse_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot read model file {}", path.string()));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_text(ss.str());
}

std::string model_to_json(const BoundaryModel& model) {
    json root;
    root["material"] = {{"youngs_modulus", model.material.youngs_modulus()},
                        {"poisson_ratio", model.material.poisson_ratio()}};
    root["virgin_stress"] = model.load.virgin_stress;
    root["domain"] = model.domain == DomainKind::interior ? "interior" : "exterior";
    json planes = json::array();
    for (SymmetryPlane p : model.symmetry_planes) {
        planes.push_back(p == SymmetryPlane::xy ? "xy" : p == SymmetryPlane::yz ? "yz" : "zx");
    }
    root["symmetry_planes"] = planes;

    json cfg = {{"gauss_order", model.config.gauss_order},
                {"quadtree_threshold", model.config.quadtree_threshold},
                {"quadtree_max_depth", model.config.quadtree_max_depth},
                {"excavation_sign", model.config.excavation_sign},
                {"threads", model.config.threads}};
    if (model.config.merge_tol) {
        cfg["merge_tol"] = *model.config.merge_tol;
    }
    root["config"] = cfg;

    json patches = json::array();
    for (const auto& p : model.patches) {
        const NurbsPatch& base = p.surface.base();
        json cps = json::array();
        for (const auto& x : base.control_points()) {
            cps.push_back({x.x(), x.y(), x.z()});
        }
        json jp = {{"degree_u", base.space_u().degree()},
                   {"degree_v", base.space_v().degree()},
                   {"knots_u", space_json(base.space_u())},
                   {"knots_v", space_json(base.space_v())},
                   {"control_points", cps},
                   {"weights", base.weights()},
                   {"flip_normal", p.surface.flip_normal()}};
        if (const TrimmedPatch* t = p.surface.trimmed()) {
            jp["trim"] = {{"curves", {curve_json(t->first()), curve_json(t->second())}}};
        }
        jp["field"] = {{"degree_u", p.field.u.degree()},
                       {"degree_v", p.field.v.degree()},
                       {"knots_u", space_json(p.field.u)},
                       {"knots_v", space_json(p.field.v)}};
        if (!p.extra_lines_u.empty() || !p.extra_lines_v.empty()) {
            jp["subdivision"] = {{"u", p.extra_lines_u}, {"v", p.extra_lines_v}};
        }
        patches.push_back(std::move(jp));
    }
    root["patches"] = patches;

    if (model.probe) {
        root["probe"] = {{"patch", model.probe->patch},
                         {"s", model.probe->s},
                         {"t", model.probe->t},
                         {"component", axis_name(model.probe->component)}};
    }
    return root.dump(2);
}

void write_model(const BoundaryModel& model, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << model_to_json(model) << '\n';
}

TraceRequest parse_trace_selector(const std::string& selector, int samples) {
    std::vector<std::string> parts;
    std::stringstream ss(selector);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw InvalidArgument(fmt::format(
            "trace selector '{}' must look like PATCH:CURVE[:COMPONENT]", selector));
    }
    TraceRequest req;
    try {
        std::size_t used = 0;
        req.patch = std::stoi(parts[0], &used);
        if (used != parts[0].size()) {
            throw std::invalid_argument("trailing characters");
        }
    } catch (const std::exception&) {
        throw InvalidArgument(fmt::format("trace selector patch '{}' is not an integer", parts[0]));
    }
    const std::string& c = parts[1];
    if (c == "trim1") {
        req.curve = TraceCurve::first_trim;
    } else if (c == "trim2") {
        req.curve = TraceCurve::second_trim;
    } else if (c == "s0") {
        req.curve = TraceCurve::edge_s0;
    } else if (c == "s1") {
        req.curve = TraceCurve::edge_s1;
    } else if (c == "t0") {
        req.curve = TraceCurve::edge_t0;
    } else if (c == "t1") {
        req.curve = TraceCurve::edge_t1;
    } else {
        throw InvalidArgument(fmt::format(
            "unknown trace curve '{}' (expected trim1, trim2, s0, s1, t0 or t1)", c));
    }
    if (parts.size() == 3) {
        const std::string& a = parts[2];
        if (a == "x") {
            req.component = 0;
        } else if (a == "y") {
            req.component = 1;
        } else if (a == "z") {
            req.component = 2;
        } else {
            throw InvalidArgument(fmt::format("unknown trace component '{}'", a));
        }
    }
    req.samples = samples;
    return req;
}

void write_trace(std::ostream& out, const BoundaryModel& model, const Solution& solution,
                 const TraceRequest& request) {
    if (request.samples < 2) {
        throw InvalidArgument("a trace needs at least two samples");
    }
    if (request.patch < 0 || request.patch >= static_cast<int>(model.patches.size())) {
        throw InvalidArgument(fmt::format("unknown patch id {}", request.patch));
    }
    if (request.component < 0 || request.component > 2) {
        throw InvalidArgument("trace component must be 0, 1 or 2");
    }
    const bool trim_curve = request.curve == TraceCurve::first_trim ||
                            request.curve == TraceCurve::second_trim;
    const Surface& surface = model.patches[request.patch].surface;
    if (trim_curve && !surface.is_trimmed()) {
        throw InvalidArgument(
            fmt::format("patch {} is not trimmed; use an edge selector", request.patch));
    }

    fmt::print(out, "arc_length,x,y,z,u_{}\n", axis_name(request.component));
    double arc = 0.0;
    Eigen::Vector3d prev = Eigen::Vector3d::Zero();
    for (int i = 0; i < request.samples; ++i) {
        const double x = static_cast<double>(i) / (request.samples - 1);
        const Eigen::Vector2d st = curve_parameter_point(request.curve, x);
        const Eigen::Vector3d p = surface.point(st.x(), st.y());
        if (i > 0) {
            arc += (p - prev).norm();
        }
        prev = p;
        const Eigen::Vector3d u =
            evaluate_displacement(model, solution, request.patch, st.x(), st.y());
        fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", arc, p.x(), p.y(), p.z(),
                   u[request.component]);
    }
}

void write_trace(const std::filesystem::path& path, const BoundaryModel& model,
                 const Solution& solution, const TraceRequest& request) {
    std::ostringstream buffer;
    write_trace(buffer, model, solution, request);
    auto out = open_for_write(path);
    out << buffer.str();
}

void write_vtk(std::ostream& out, const BoundaryModel& model, const Solution& solution,
               double scale, int samples) {
    if (samples < 2) {
        throw InvalidArgument("VTK sampling needs at least two points per direction");
    }
    const std::size_t per_patch = static_cast<std::size_t>(samples) * samples;
    const std::size_t cells_per_patch = static_cast<std::size_t>(samples - 1) * (samples - 1);
    const std::size_t npts = per_patch * model.patches.size();
    const std::size_t ncells = cells_per_patch * model.patches.size();

    std::vector<Eigen::Vector3d> pos;
    std::vector<Eigen::Vector3d> disp;
    pos.reserve(npts);
    disp.reserve(npts);
    for (std::size_t k = 0; k < model.patches.size(); ++k) {
        for (int j = 0; j < samples; ++j) {
            const double t = static_cast<double>(j) / (samples - 1);
            for (int i = 0; i < samples; ++i) {
                const double s = static_cast<double>(i) / (samples - 1);
                const Eigen::Vector3d u =
                    evaluate_displacement(model, solution, static_cast<int>(k), s, t);
                pos.push_back(model.patches[k].surface.point(s, t) + scale * u);
                disp.push_back(u);
            }
        }
    }

    out << "# vtk DataFile Version 3.0\n";
    out << "igabem boundary displacement\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    fmt::print(out, "POINTS {} double\n", npts);
    for (const auto& p : pos) {
        fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", p.x(), p.y(), p.z());
    }
    fmt::print(out, "CELLS {} {}\n", ncells, 5 * ncells);
    for (std::size_t k = 0; k < model.patches.size(); ++k) {
        const std::size_t base = k * per_patch;
        for (int j = 0; j + 1 < samples; ++j) {
            for (int i = 0; i + 1 < samples; ++i) {
                const std::size_t a = base + i + static_cast<std::size_t>(samples) * j;
                fmt::print(out, "4 {} {} {} {}\n", a, a + 1, a + 1 + samples, a + samples);
            }
        }
    }
    fmt::print(out, "CELL_TYPES {}\n", ncells);
    for (std::size_t c = 0; c < ncells; ++c) {
        out << "9\n";
    }
    fmt::print(out, "CELL_DATA {}\n", ncells);
    out << "SCALARS patch int 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < model.patches.size(); ++k) {
        for (std::size_t c = 0; c < cells_per_patch; ++c) {
            out << k << '\n';
        }
    }
    fmt::print(out, "POINT_DATA {}\n", npts);
    out << "VECTORS displacement double\n";
    for (const auto& u : disp) {
        fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", u.x(), u.y(), u.z());
    }
}

void write_vtk(const std::filesystem::path& path, const BoundaryModel& model,
               const Solution& solution, double scale, int samples) {
    std::ostringstream buffer;
    write_vtk(buffer, model, solution, scale, samples);
    auto out = open_for_write(path);
    out << buffer.str();
}

void write_coefficients(std::ostream& out, const CollocationSet& colloc,
                        const Solution& solution) {
    out << "node,x,y,z,dx,dy,dz\n";
    for (std::size_t n = 0; n < colloc.size(); ++n) {
        const Eigen::Vector3d& p = colloc.nodes[n].point;
        const auto d = solution.coefficients.segment<3>(3 * static_cast<Eigen::Index>(n));
        fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", n, p.x(), p.y(),
                   p.z(), d[0], d[1], d[2]);
    }
}

}  // namespace igabem

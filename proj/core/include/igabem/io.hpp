#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "igabem/model.hpp"
#include "igabem/solve.hpp"

namespace igabem {

/// Reads a model file (JSON, see schema/model.schema.json). Schema problems
/// throw ParseError carrying a JSON pointer; geometric problems (bad knots,
/// degenerate trims, ...) are rethrown as ParseError at the offending patch.
BoundaryModel parse_model(const std::filesystem::path& path);
BoundaryModel parse_model_text(const std::string& text);

/// Serializes a model so that parse_model_text(model_to_json(m)) == m.
std::string model_to_json(const BoundaryModel& model);
void write_model(const BoundaryModel& model, const std::filesystem::path& path);

enum class TraceCurve {
    first_trim,   ///< s = 0 of a trimmed patch
    second_trim,  ///< s = 1 of a trimmed patch
    edge_s0,
    edge_s1,
    edge_t0,
    edge_t1,
};

struct TraceRequest {
    int patch = 0;
    TraceCurve curve = TraceCurve::first_trim;
    int samples = 51;
    int component = 2;
};

/// Parses "PATCH:CURVE[:COMPONENT]", CURVE one of trim1, trim2, s0, s1, t0,
/// t1 and COMPONENT one of x, y, z (default z).
TraceRequest parse_trace_selector(const std::string& selector, int samples = 51);

/// CSV "arc_length,x,y,z,u_<c>": samples uniform in the curve parameter,
/// arc length accumulated as chord length between samples.
void write_trace(std::ostream& out, const BoundaryModel& model, const Solution& solution,
                 const TraceRequest& request);
void write_trace(const std::filesystem::path& path, const BoundaryModel& model,
                 const Solution& solution, const TraceRequest& request);

/// Legacy ASCII VTK unstructured grid of quads, `samples` x `samples` points
/// per patch, with point vectors "displacement". Points are moved by
/// scale * displacement.
void write_vtk(std::ostream& out, const BoundaryModel& model, const Solution& solution,
               double scale = 0.0, int samples = 17);
void write_vtk(const std::filesystem::path& path, const BoundaryModel& model,
               const Solution& solution, double scale = 0.0, int samples = 17);

/// Coefficients as CSV "node,x,y,z,dx,dy,dz" (x,y,z = collocation point).
void write_coefficients(std::ostream& out, const CollocationSet& colloc,
                        const Solution& solution);

}  // namespace igabem

// Command-line front end: inspect / optimize / render / symmetrize.
//
// Exit codes: 0 success, 2 input error, 3 topology violation,
// 4 over/under mismatch.

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "knotfair/knotfair.hpp"

using namespace knotfair;

namespace {

struct CommonInput {
    std::string file;
    std::string element_id;
    std::string weights_path;
};

MinObj load_knot(const std::string& file, const std::string& element_id) {
    if (file.size() > 3 && file.substr(file.size() - 3) == ".kv")
        return from_knotvec(read_knotvec(file));
    SvgReadOptions opts;
    opts.element_id = element_id;
    return to_minobj(read_svg(file, opts));
}

BadnessWeights load_weights(const std::string& path) {
    if (path.empty()) return BadnessWeights{};
    return weights_from_config(read_config(path));
}

void print_breakdown(const char* tag, const BadnessBreakdown& b, const BadnessWeights& w) {
    std::printf("%s total_crossing_angles = %.7g\n", tag, b.angle);
    std::printf("%s total_bending_energy  = %.7g\n", tag, b.bend);
    std::printf("%s crossing_separation   = %.7g\n", tag, b.cross_sep);
    std::printf("%s repel                 = %.7g\n", tag, b.repel);
    std::printf("%s topology              = %.7g\n", tag, b.topology);
    std::printf("%s badness               = %.7g\n", tag, b.weighted_total(w));
}

Vec2 node_centroid(const MinObj& m) {
    Vec2 c{0, 0};
    for (const Point2& p : m.nodes) c += p;
    return c / static_cast<double>(m.size());
}

MinObj translated(const MinObj& m, Vec2 by) {
    MinObj out = m;
    for (Point2& p : out.nodes) p += by;
    for (Point2& p : out.handles) p += by;
    return out;
}

int run_inspect(const CommonInput& in) {
    const MinObj m = load_knot(in.file, in.element_id);
    const ControlPoints c = to_controlpoints(m);
    const BadnessWeights w = load_weights(in.weights_path);
    const TopologyFingerprint fp = fingerprint(c);
    std::printf("nodes=%d dim=%d crossings=%d\n", m.size(), 4 * m.size(), fp.crossing_count);
    for (std::size_t i = 0; i < fp.crossing_pairs.size(); ++i)
        std::printf("crossing %zu: segments %d x %d\n", i + 1, fp.crossing_pairs[i].first,
                    fp.crossing_pairs[i].second);
    print_breakdown("", badness_breakdown(c, w, fp), w);
    return 0;
}

int run_symmetrize(const CommonInput& in, const std::string& symmetry_path,
                   const std::string& out_svg) {
    const MinObj m = load_knot(in.file, in.element_id);
    const SymmetrySpec spec = symmetry_from_config(read_config(symmetry_path));
    // the spec's axis/center is the origin; work about the node centroid
    const Vec2 center = node_centroid(m);
    const MinObj centered = translated(m, -center);
    std::printf("symmetry_error before = %.7g\n", symmetry_error(centered, spec));
    const MinObj sym = symmetrize(centered, spec);
    std::printf("symmetry_error after  = %.7g\n", symmetry_error(sym, spec));
    const MinObj out = translated(sym, center);
    RenderOptions ropts;
    write_svg(knotplot2(to_controlpoints(out), ropts), out_svg);
    std::printf("wrote %s\n", out_svg.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knot diagram beautifier: parse, score, optimize and render "
                 "closed cubic Bezier knot projections"};
    app.require_subcommand(1);

    CommonInput in;
    std::string out_path, svg_out, symmetry_path, overunder_path, checkpoint, resume;
    OptimizeOptions oopts;
    RenderOptions ropts;
    std::string algorithm = "nelder-mead";
    bool show_handles = false, show_curvature = false, show_labels = false, show_nodes = false,
         rainbow = false;

    CLI::App* inspect = app.add_subcommand("inspect", "report size, crossings and badness");
    inspect->add_option("svg", in.file, "input SVG (or .kv) file")->required();
    inspect->add_option("--weights", in.weights_path, "weights config file");
    inspect->add_option("--id", in.element_id, "select path element by id");

    CLI::App* optimize = app.add_subcommand("optimize", "minimize badness numerically");
    optimize->add_option("svg", in.file, "input SVG (or .kv) file")->required();
    optimize->add_option("-o,--out", out_path, "output knot vector (.kv)")->required();
    optimize->add_option("--svg-out", svg_out, "also write an SVG preview of the result");
    optimize->add_option("--weights", in.weights_path, "weights config file");
    optimize->add_option("--symmetry", symmetry_path, "symmetry spec; optimize in reduced space");
    optimize->add_option("--algorithm", algorithm, "nelder-mead (default) or bfgs-fd");
    optimize->add_option("--max-evals", oopts.max_evals, "objective evaluation budget");
    optimize->add_option("--seed", oopts.seed, "simplex jitter seed");
    optimize->add_option("--ftol", oopts.ftol, "relative f convergence tolerance");
    optimize->add_option("--xtol", oopts.xtol, "simplex diameter tolerance");
    optimize->add_option("--restarts", oopts.restart_count, "simplex restarts after convergence");
    optimize->add_option("--checkpoint-every", oopts.checkpoint_every,
                         "evals between progress/checkpoint updates");
    optimize->add_option("--checkpoint", checkpoint, "checkpoint file (.kv + .json sidecar)");
    optimize->add_option("--resume", resume, "start from a checkpoint .kv instead of the SVG");
    optimize->add_option("--id", in.element_id, "select path element by id");

    CLI::App* render = app.add_subcommand("render", "draw the knot as an SVG diagram");
    render->add_option("knot", in.file, "input knot: .svg or .kv")->required();
    render->add_option("-o,--out", out_path, "output SVG file")->required();
    render->add_option("--overunder", overunder_path,
                       "over/under table; draws understrand breaks");
    render->add_option("--gap", ropts.gap, "understrand break half-length, display units");
    render->add_option("--stroke-width", ropts.stroke_width, "stroke width, display units");
    render->add_option("--curvature-scale", ropts.curvature_scale,
                       "disc radius per unit curvature (0 = auto)");
    render->add_flag("--show-handles", show_handles, "draw Bezier handles");
    render->add_flag("--show-curvature", show_curvature, "draw curvature discs");
    render->add_flag("--show-labels", show_labels, "number the strands");
    render->add_flag("--show-nodes", show_nodes, "mark nodes with squares");
    render->add_flag("--rainbow", rainbow, "color each strand separately");
    render->add_option("--id", in.element_id, "select path element by id");

    CLI::App* symmetrize_cmd = app.add_subcommand("symmetrize", "project onto exact symmetry");
    symmetrize_cmd->add_option("svg", in.file, "input SVG (or .kv) file")->required();
    symmetrize_cmd->add_option("--symmetry", symmetry_path, "symmetry spec file")->required();
    symmetrize_cmd->add_option("-o,--out", out_path, "output SVG file")->required();
    symmetrize_cmd->add_option("--id", in.element_id, "select path element by id");

    CLI11_PARSE(app, argc, argv);

    try {
        if (inspect->parsed()) return run_inspect(in);

        if (symmetrize_cmd->parsed()) return run_symmetrize(in, symmetry_path, out_path);

        if (optimize->parsed()) {
            if (algorithm == "nelder-mead") oopts.algorithm = Algorithm::NelderMead;
            else if (algorithm == "bfgs-fd") oopts.algorithm = Algorithm::BfgsFd;
            else throw Error(Errc::MalformedPath, "unknown algorithm '" + algorithm + "'");
            oopts.checkpoint_path = checkpoint;
            oopts.progress = true;

            MinObj m = resume.empty() ? load_knot(in.file, in.element_id)
                                      : from_knotvec(read_knotvec(resume));
            const BadnessWeights w = load_weights(in.weights_path);
            std::optional<SymmetrySpec> spec;
            if (!symmetry_path.empty()) {
                spec = symmetry_from_config(read_config(symmetry_path));
                // reduced-space optimization assumes the symmetry axis/center
                // at the origin
                m = translated(m, -node_centroid(m));
            }
            const auto [knot, report] = minimize(to_knotvec(m), w, spec, oopts);
            const MinObj result = from_knotvec(knot);

            print_breakdown("before", report.before, w);
            print_breakdown("after ", report.after, w);
            std::printf("evals = %ld, converged = %s\n", report.evals,
                        report.converged ? "yes" : "no");
            write_knotvec(knot, out_path);
            std::printf("wrote %s\n", out_path.c_str());
            if (!svg_out.empty()) {
                write_svg(knotplot2(to_controlpoints(result), RenderOptions{}), svg_out);
                std::printf("wrote %s\n", svg_out.c_str());
            }
            if (report.topology_changed) {
                std::fprintf(stderr, "warning: optimizer end point changed the crossing set; "
                                     "returned the best topology-preserving iterate\n");
                if (report.final_badness >= report.initial_badness) return 3;
            }
            return 0;
        }

        if (render->parsed()) {
            ropts.show_handles = show_handles;
            ropts.show_curvature = show_curvature;
            ropts.show_labels = show_labels;
            ropts.show_nodes = show_nodes;
            ropts.rainbow = rainbow;
            const MinObj m = load_knot(in.file, in.element_id);
            const ControlPoints c = to_controlpoints(m);
            RenderDoc doc;
            if (!overunder_path.empty()) {
                doc = knotplot(c, read_overunder(overunder_path), ropts);
            } else {
                doc = knotplot2(c, ropts);
            }
            write_svg(doc, out_path);
            std::printf("wrote %s\n", out_path.c_str());
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.code()) {
            case Errc::TopologyChanged: return 3;
            case Errc::OverUnderMismatch: return 4;
            default: return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

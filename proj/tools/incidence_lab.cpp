// Command line front end: every experiment is a subcommand that reads core
// text formats, runs the library, and writes CSV/JSON plus a manifest with
// input/output digests. All randomness flows from --seed; --threads must
// never change any output byte.

#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "inclab/area.hpp"
#include "inclab/configs.hpp"
#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/gridscan.hpp"
#include "inclab/incidence.hpp"
#include "inclab/partition.hpp"
#include "inclab/poly.hpp"
#include "inclab/quadric.hpp"
#include "inclab/report.hpp"
#include "inclab/singular.hpp"

namespace fs = std::filesystem;
using namespace inclab;

namespace {

const char* kVersion = "0.1.0";

struct Ctx {
    std::string out = "out";
    std::uint64_t seed = 1;
    int threads = 0;
    bool serial = false;
    std::string params_file;

    Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
    std::string path(const std::string& name) const { return out + "/" + name; }
};

// Inject "--key=value" for every scalar key of the JSON params file that is
// not already present on the command line; explicit flags win.
std::vector<std::string> merge_params(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--params" && i + 1 < args.size())
            file = args[i + 1];
        else if (args[i].rfind("--params=", 0) == 0)
            file = args[i].substr(9);
    }
    if (file.empty()) return args;
    json j = json::parse(read_text(file));
    if (!j.is_object()) throw ParseError("params file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_primitive()) continue;
        std::string flag = "--" + it.key();
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        std::string val =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        args.push_back(flag + "=" + val);
    }
    return args;
}

IntVec parse_int_csv(const std::string& text) {
    IntVec out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t a = cell.find_first_not_of(" \t");
        if (a == std::string::npos) throw ParseError("empty integer cell");
        std::size_t b = cell.find_last_not_of(" \t");
        out.emplace_back(cell.substr(a, b - a + 1));
    }
    if (out.empty()) throw ParseError("empty integer vector");
    return out;
}

std::vector<IntVec> read_int_rows(const std::string& path) {
    std::vector<IntVec> rows;
    std::istringstream in(read_text(path));
    std::string row;
    while (std::getline(in, row)) {
        std::size_t hash = row.find('#');
        if (hash != std::string::npos) row.erase(hash);
        if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(parse_int_csv(row));
    }
    return rows;
}

std::vector<RatVec> read_rat_rows(const std::string& path) {
    std::vector<RatVec> rows;
    std::istringstream in(read_text(path));
    std::string row;
    while (std::getline(in, row)) {
        std::size_t hash = row.find('#');
        if (hash != std::string::npos) row.erase(hash);
        if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(parse_rational_csv(row));
    }
    return rows;
}

std::string int_csv(const IntVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i].get_str();
    }
    return s;
}

std::string double_csv(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

json partition_to_json(const Partition& part) {
    json j;
    j["n"] = part.n;
    json factors = json::array();
    for (const auto& f : part.factors) factors.push_back(format_poly(f));
    j["factors"] = factors;
    j["product_degree"] = part.product_degree;
    json hist = json::object();
    for (const auto& [k, v] : part.histogram) hist[k] = v;
    j["histogram"] = hist;
    j["wall_count"] = part.wall_count;
    j["verified"] = part.verified;
    j["max_cell"] = part.max_cell;
    j["cell_bound"] = part.cell_bound;
    j["seed"] = part.seed;
    return j;
}

Partition partition_from_json(const json& j) {
    Partition part;
    part.n = j.at("n").get<std::size_t>();
    for (const auto& f : j.at("factors")) {
        MultiPoly p = parse_poly(f.get<std::string>(), part.n);
        part.product_degree += p.degree();
        part.factors.push_back(std::move(p));
    }
    return part;
}

std::vector<Direction> load_directions(const std::string& lines_file,
                                       const std::string& dirs_file) {
    std::vector<Direction> dirs;
    if (!lines_file.empty()) {
        for (const auto& l : read_lines(lines_file)) dirs.push_back(l.dir);
    } else if (!dirs_file.empty()) {
        for (const auto& row : read_int_rows(dirs_file))
            dirs.push_back(canonical_direction(row));
    } else {
        throw BadParams("need --lines or --dirs");
    }
    return dirs;
}

} // namespace

int main(int argc, char** argv) {
    Ctx ctx;
    Manifest mf;
    std::function<int()> run;

    CLI::App app{"incidence geometry workbench"};
    app.set_version_flag("--version", kVersion);
    app.add_option("--out", ctx.out, "output directory")->capture_default_str();
    app.add_option("--seed", ctx.seed, "master seed")->capture_default_str();
    app.add_option("--threads", ctx.threads, "worker threads (0 = library default)");
    app.add_flag("--serial", ctx.serial, "run the serial reference paths");
    app.add_option("--params", ctx.params_file, "JSON file with defaults for flags");
    app.require_subcommand(0, 1);

    // furstenberg
    {
        auto* sub = app.add_subcommand("furstenberg", "generate the M-adic configuration");
        sub->fallthrough();
        auto n = std::make_shared<std::size_t>(2);
        auto M = std::make_shared<long>(2);
        auto beta = std::make_shared<std::string>("1");
        auto count_only = std::make_shared<bool>(false);
        sub->add_option("--n", *n, "ambient dimension")->capture_default_str();
        sub->add_option("--M", *M, "base M")->capture_default_str();
        sub->add_option("--beta", *beta, "exponent in [0,1], rational")->capture_default_str();
        sub->add_flag("--count-only", *count_only, "report |P1| without materializing");
        sub->callback([&, n, M, beta, count_only]() {
            run = [&, n, M, beta, count_only]() {
                mf.subcommand = "furstenberg";
                mf.params = {{"n", *n}, {"M", *M}, {"beta", *beta}, {"count_only", *count_only}};
                Rational b = parse_rational(*beta);
                json j;
                j["n"] = *n;
                j["M"] = *M;
                j["beta"] = *beta;
                if (*count_only) {
                    j["point_count"] = furstenberg_point_count(*M, b).get_str();
                } else {
                    Config cfg = gen_furstenberg({*n, *M, b});
                    write_points(ctx.path("points.txt"), cfg.points);
                    write_lines(ctx.path("lines.txt"), cfg.lines);
                    j["points"] = cfg.points.size();
                    j["lines"] = cfg.lines.size();
                    mf.outputs.push_back(ctx.path("points.txt"));
                    mf.outputs.push_back(ctx.path("lines.txt"));
                }
                write_json(ctx.path("furstenberg.json"), j);
                mf.outputs.push_back(ctx.path("furstenberg.json"));
                return 0;
            };
        });
    }

    // gridpoly
    {
        auto* sub = app.add_subcommand("gridpoly", "product of shifted coordinate planes");
        sub->fallthrough();
        auto n = std::make_shared<std::size_t>(2);
        auto d = std::make_shared<long>(8);
        sub->add_option("--n", *n, "variables")->capture_default_str();
        sub->add_option("--d", *d, "degree budget")->capture_default_str();
        sub->callback([&, n, d]() {
            run = [&, n, d]() {
                mf.subcommand = "gridpoly";
                mf.params = {{"n", *n}, {"d", *d}};
                MultiPoly p = gen_grid_polynomial(*n, *d);
                write_poly(ctx.path("grid.poly"), p);
                json j{{"n", *n},
                       {"d", *d},
                       {"degree", p.degree()},
                       {"terms", p.terms().size()}};
                write_json(ctx.path("gridpoly.json"), j);
                mf.outputs = {ctx.path("grid.poly"), ctx.path("gridpoly.json")};
                return 0;
            };
        });
    }

    // incidences
    {
        auto* sub = app.add_subcommand("incidences", "exact incidence counts");
        sub->fallthrough();
        auto config = std::make_shared<std::string>();
        auto points = std::make_shared<std::string>();
        auto lines = std::make_shared<std::string>();
        auto prefilter = std::make_shared<bool>(false);
        sub->add_option("--config", *config, "directory holding points.txt and lines.txt");
        sub->add_option("--points", *points, "points file");
        sub->add_option("--lines", *lines, "lines file");
        sub->add_flag("--prefilter", *prefilter, "float screening before exact checks");
        sub->callback([&, config, points, lines, prefilter]() {
            run = [&, config, points, lines, prefilter]() {
                mf.subcommand = "incidences";
                std::string pfile = *points, lfile = *lines;
                if (!config->empty()) {
                    pfile = *config + "/points.txt";
                    lfile = *config + "/lines.txt";
                }
                if (pfile.empty() || lfile.empty())
                    throw BadParams("need --config or both --points and --lines");
                mf.params = {{"points", pfile}, {"lines", lfile}, {"prefilter", *prefilter}};
                mf.inputs = {pfile, lfile};
                Config cfg;
                cfg.points = read_points(pfile);
                cfg.lines = read_lines(lfile);
                cfg.n = cfg.points.empty() ? 0 : cfg.points.front().size();
                IncidenceReport rep = count_incidences(cfg, ctx.exec(), *prefilter);
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < rep.per_line.size(); ++i)
                    rows.push_back({std::to_string(i), std::to_string(rep.per_line[i])});
                rows.push_back({"total", std::to_string(rep.total)});
                write_csv(ctx.path("incidences.csv"), {"line", "count"}, rows);
                json j{{"total", rep.total},
                       {"min_per_line", rep.min_per_line},
                       {"max_per_line", rep.max_per_line},
                       {"points", cfg.points.size()},
                       {"lines", cfg.lines.size()}};
                write_json(ctx.path("incidences.json"), j);
                mf.outputs = {ctx.path("incidences.csv"), ctx.path("incidences.json")};
                return 0;
            };
        });
    }

    // density
    {
        auto* sub = app.add_subcommand("density", "direction density and separation");
        sub->fallthrough();
        auto lines = std::make_shared<std::string>();
        auto dirs = std::make_shared<std::string>();
        auto eps = std::make_shared<double>(0.1);
        auto probes = std::make_shared<long long>(4096);
        auto slo = std::make_shared<std::string>();
        auto shi = std::make_shared<std::string>();
        sub->add_option("--lines", *lines, "take directions from a lines file");
        sub->add_option("--dirs", *dirs, "integer direction rows");
        sub->add_option("--epsilon", *eps, "density radius")->capture_default_str();
        sub->add_option("--probes", *probes, "requested probe count")->capture_default_str();
        sub->add_option("--slope-lo", *slo, "slope box lower corner (rationals)");
        sub->add_option("--slope-hi", *shi, "slope box upper corner (rationals)");
        sub->callback([&, lines, dirs, eps, probes, slo, shi]() {
            run = [&, lines, dirs, eps, probes, slo, shi]() {
                mf.subcommand = "density";
                mf.params = {{"lines", *lines}, {"dirs", *dirs},     {"epsilon", *eps},
                             {"probes", *probes}, {"slope_lo", *slo}, {"slope_hi", *shi}};
                if (!lines->empty()) mf.inputs.push_back(*lines);
                if (!dirs->empty()) mf.inputs.push_back(*dirs);
                auto ds = load_directions(*lines, *dirs);
                Region region = Region::sphere();
                if (!slo->empty() || !shi->empty()) {
                    RatVec lo = parse_rational_csv(*slo);
                    RatVec hi = parse_rational_csv(*shi);
                    if (lo.size() != hi.size()) throw BadParams("slope corners disagree");
                    std::vector<std::pair<Rational, Rational>> box;
                    for (std::size_t i = 0; i < lo.size(); ++i) box.push_back({lo[i], hi[i]});
                    region = Region::slopes(std::move(box));
                }
                DensityReport rep =
                    direction_density(ds, *eps, region, *probes, ctx.seed, ctx.exec());
                SeparationReport sep = direction_separation(ds, *eps);
                json j{{"epsilon", rep.epsilon},
                       {"max_gap", rep.max_gap},
                       {"probe_mesh", rep.probe_mesh},
                       {"pass", rep.pass},
                       {"probes", rep.probes},
                       {"region", rep.region},
                       {"directions", ds.size()},
                       {"min_separation", sep.min_distance},
                       {"separated", sep.separated}};
                write_json(ctx.path("density.json"), j);
                mf.outputs = {ctx.path("density.json")};
                return 0;
            };
        });
    }

    // flats
    {
        auto* sub = app.add_subcommand("flats", "max lines in a common r-flat");
        sub->fallthrough();
        auto lines = std::make_shared<std::string>();
        auto r = std::make_shared<int>(2);
        auto budget = std::make_shared<long long>(2000000);
        sub->add_option("--lines", *lines, "lines file")->required();
        sub->add_option("--r", *r, "flat dimension")->capture_default_str();
        sub->add_option("--budget", *budget, "work budget before sampling")
            ->capture_default_str();
        sub->callback([&, lines, r, budget]() {
            run = [&, lines, r, budget]() {
                mf.subcommand = "flats";
                mf.params = {{"lines", *lines}, {"r", *r}, {"budget", *budget}};
                mf.inputs = {*lines};
                auto ls = read_lines(*lines);
                FlatReport rep = max_rflat_concentration(ls, *r, *budget, ctx.seed);
                json span = json::array();
                for (const auto& row : rep.witness_span) span.push_back(format_rational_csv(row));
                json j{{"r", rep.r},
                       {"max_count", rep.max_count},
                       {"exact", rep.exact},
                       {"witness_base", format_rational_csv(rep.witness_base)},
                       {"witness_span", span}};
                write_json(ctx.path("flats.json"), j);
                mf.outputs = {ctx.path("flats.json")};
                return 0;
            };
        });
    }

    // nbhd-volume
    {
        auto* sub = app.add_subcommand("nbhd-volume", "volume of the zero set neighborhood");
        sub->fallthrough();
        auto poly = std::make_shared<std::string>();
        auto alpha = std::make_shared<double>(0.1);
        auto res = std::make_shared<long>(32);
        auto metric = std::make_shared<std::string>("euclidean");
        sub->add_option("--poly", *poly, "polynomial file")->required();
        sub->add_option("--alpha", *alpha, "neighborhood radius")->capture_default_str();
        sub->add_option("--resolution", *res, "grid cells per alpha")->capture_default_str();
        sub->add_option("--metric", *metric, "euclidean or chebyshev")->capture_default_str();
        sub->callback([&, poly, alpha, res, metric]() {
            run = [&, poly, alpha, res, metric]() {
                mf.subcommand = "nbhd-volume";
                mf.params = {{"poly", *poly},
                             {"alpha", *alpha},
                             {"resolution", *res},
                             {"metric", *metric}};
                mf.inputs = {*poly};
                DilationMetric m = DilationMetric::euclidean;
                if (*metric == "chebyshev")
                    m = DilationMetric::chebyshev;
                else if (*metric != "euclidean")
                    throw BadParams("metric must be euclidean or chebyshev");
                MultiPoly Q = read_poly(*poly);
                VolumeEstimate est = neighborhood_volume(Q, *alpha, *res, m, ctx.exec());
                json j{{"value", est.value},
                       {"resolution", *res},
                       {"cells_per_axis", est.cells},
                       {"grid_side", est.grid_side},
                       {"zero_cells", est.zero_cell_count},
                       {"flags", est.flags}};
                write_json(ctx.path("volume.json"), j);
                mf.outputs = {ctx.path("volume.json")};
                return 0;
            };
        });
    }

    // directed-area
    {
        auto* sub = app.add_subcommand("directed-area", "fiber-crossing surface integral");
        sub->fallthrough();
        auto poly = std::make_shared<std::string>();
        auto v = std::make_shared<std::string>();
        auto fibers = std::make_shared<long>(2048);
        auto mode = std::make_shared<std::string>("exact");
        auto samples = std::make_shared<long>(64);
        auto cylinder = std::make_shared<bool>(false);
        auto center = std::make_shared<std::string>();
        auto radius = std::make_shared<std::string>("1/4");
        sub->add_option("--poly", *poly, "polynomial file")->required();
        sub->add_option("--v", *v, "direction, integer csv")->required();
        sub->add_option("--fibers", *fibers, "fibers per axis")->capture_default_str();
        sub->add_option("--mode", *mode, "exact or sampled")->capture_default_str();
        sub->add_option("--samples", *samples, "samples per fiber (sampled mode)")
            ->capture_default_str();
        sub->add_flag("--cylinder", *cylinder, "restrict fibers to a cylinder");
        sub->add_option("--center", *center, "cylinder axis point, rational csv");
        sub->add_option("--R", *radius, "cylinder radius, rational")->capture_default_str();
        sub->callback([&, poly, v, fibers, mode, samples, cylinder, center, radius]() {
            run = [&, poly, v, fibers, mode, samples, cylinder, center, radius]() {
                mf.subcommand = "directed-area";
                mf.params = {{"poly", *poly},       {"v", *v},
                             {"fibers", *fibers},   {"mode", *mode},
                             {"samples", *samples}, {"cylinder", *cylinder},
                             {"center", *center},   {"R", *radius}};
                mf.inputs = {*poly};
                AreaMode am;
                if (*mode == "exact")
                    am = AreaMode::exact_roots;
                else if (*mode == "sampled")
                    am = AreaMode::sampled;
                else
                    throw BadParams("mode must be exact or sampled");
                MultiPoly Q = read_poly(*poly);
                Direction dir = canonical_direction(parse_int_csv(*v));
                AreaResult res;
                if (*cylinder) {
                    RatVec c = center->empty()
                                   ? RatVec(Q.n_vars(), rat(1, 2))
                                   : parse_rational_csv(*center);
                    res = cylinder_directed_area(Q, dir, c, parse_rational(*radius),
                                                 *fibers, am, *samples, ctx.exec());
                } else {
                    res = directed_area(Q, dir, *fibers, am, *samples, ctx.exec());
                }
                json j{{"value", res.value},
                       {"fibers_per_axis", res.fibers_per_axis},
                       {"total_fibers", res.total_fibers},
                       {"counted_fibers", res.counted_fibers},
                       {"contained_fibers", res.contained_fibers},
                       {"mode", *mode},
                       {"samples_per_fiber", res.samples_per_fiber}};
                write_json(ctx.path("area.json"), j);
                mf.outputs = {ctx.path("area.json")};
                return 0;
            };
        });
    }

    // components
    {
        auto* sub = app.add_subcommand("components", "zero set component count");
        sub->fallthrough();
        auto poly = std::make_shared<std::string>();
        auto res = std::make_shared<long>(256);
        sub->add_option("--poly", *poly, "polynomial file")->required();
        sub->add_option("--resolution", *res, "grid cells per axis")->capture_default_str();
        sub->callback([&, poly, res]() {
            run = [&, poly, res]() {
                mf.subcommand = "components";
                mf.params = {{"poly", *poly}, {"resolution", *res}};
                mf.inputs = {*poly};
                MultiPoly Q = read_poly(*poly);
                ComponentCount cc = connected_components(Q, *res, ctx.exec());
                json j{{"count", cc.count},
                       {"zero_cells", cc.zero_cell_count},
                       {"resolution", *res},
                       {"flags", cc.flags}};
                write_json(ctx.path("components.json"), j);
                mf.outputs = {ctx.path("components.json")};
                return 0;
            };
        });
    }

    // partition
    {
        auto* sub = app.add_subcommand("partition", "verified polynomial partition");
        sub->fallthrough();
        auto points = std::make_shared<std::string>();
        auto D = std::make_shared<int>(8);
        auto tau = std::make_shared<double>(4.0);
        auto budget = std::make_shared<long long>(50000000);
        sub->add_option("--points", *points, "points file")->required();
        sub->add_option("--D", *D, "degree budget")->capture_default_str();
        sub->add_option("--tau", *tau, "cell occupancy slack")->capture_default_str();
        sub->add_option("--budget", *budget, "search effort budget")->capture_default_str();
        sub->callback([&, points, D, tau, budget]() {
            run = [&, points, D, tau, budget]() {
                mf.subcommand = "partition";
                mf.params = {{"points", *points}, {"D", *D}, {"tau", *tau}, {"budget", *budget}};
                mf.inputs = {*points};
                auto P = read_points(*points);
                try {
                    Partition part =
                        build_partition(P, *D, *tau, ctx.seed, *budget, ctx.exec());
                    write_json(ctx.path("partition.json"), partition_to_json(part));
                    mf.outputs = {ctx.path("partition.json")};
                    return 0;
                } catch (const PartitionNotAchieved& e) {
                    json j{{"verified", false}, {"error", e.what()}};
                    write_json(ctx.path("partition.json"), j);
                    mf.outputs = {ctx.path("partition.json")};
                    std::cerr << "partition not achieved: " << e.what() << "\n";
                    return 3;
                }
            };
        });
    }

    // crossings
    {
        auto* sub = app.add_subcommand("crossings", "sign cells entered by a line");
        sub->fallthrough();
        auto part_file = std::make_shared<std::string>();
        auto line = std::make_shared<std::string>();
        auto t0 = std::make_shared<std::string>("0");
        auto t1 = std::make_shared<std::string>("1");
        sub->add_option("--partition", *part_file, "partition.json from the partition run")
            ->required();
        sub->add_option("--line", *line, "line, e.g. \"base: 0,0 | dir: 1,1\"")->required();
        sub->add_option("--t0", *t0, "segment start")->capture_default_str();
        sub->add_option("--t1", *t1, "segment end")->capture_default_str();
        sub->callback([&, part_file, line, t0, t1]() {
            run = [&, part_file, line, t0, t1]() {
                mf.subcommand = "crossings";
                mf.params = {{"partition", *part_file}, {"line", *line}, {"t0", *t0}, {"t1", *t1}};
                mf.inputs = {*part_file};
                Partition part = partition_from_json(json::parse(read_text(*part_file)));
                Line l = parse_line(*line, part.n);
                CrossingReport rep =
                    line_cell_crossings(part, l, parse_rational(*t0), parse_rational(*t1));
                json j{{"root_count", rep.root_count},
                       {"cells_entered", rep.cells_entered},
                       {"contained", rep.contained}};
                write_json(ctx.path("crossings.json"), j);
                mf.outputs = {ctx.path("crossings.json")};
                return 0;
            };
        });
    }

    // singular-scan
    {
        auto* sub = app.add_subcommand("singular-scan", "singular direction scan");
        sub->fallthrough();
        auto poly = std::make_shared<std::string>();
        auto N = std::make_shared<long>(16);
        auto eps = std::make_shared<double>(0.25);
        auto H = std::make_shared<double>(8.0);
        auto fraction = std::make_shared<double>(0.1);
        auto samples = std::make_shared<long>(256);
        auto directions = std::make_shared<long>(64);
        auto normals = std::make_shared<std::string>();
        sub->add_option("--poly", *poly, "polynomial file")->required();
        sub->add_option("--N", *N, "scale")->capture_default_str();
        sub->add_option("--eps", *eps, "cube exponent")->capture_default_str();
        sub->add_option("--H", *H, "threshold divisor")->capture_default_str();
        sub->add_option("--fraction", *fraction, "bisection fraction")->capture_default_str();
        sub->add_option("--samples", *samples, "Monte Carlo samples per cube")
            ->capture_default_str();
        sub->add_option("--directions", *directions, "directions to sample")
            ->capture_default_str();
        sub->add_option("--normals", *normals,
                        "hyperplane normals file for the crossing-formula column");
        sub->callback([&, poly, N, eps, H, fraction, samples, directions, normals]() {
            run = [&, poly, N, eps, H, fraction, samples, directions, normals]() {
                mf.subcommand = "singular-scan";
                mf.params = {{"poly", *poly},         {"N", *N},
                             {"eps", *eps},           {"H", *H},
                             {"fraction", *fraction}, {"samples", *samples},
                             {"directions", *directions}, {"normals", *normals}};
                mf.inputs = {*poly};
                MultiPoly Q = read_poly(*poly);
                ScanParams sp;
                sp.N = *N;
                sp.epsilon = *eps;
                sp.H = *H;
                sp.bisect_fraction = *fraction;
                sp.samples_per_cube = *samples;
                sp.directions = *directions;
                sp.seed = ctx.seed;
                std::vector<RatVec> norms;
                ScanReport rep;
                if (!normals->empty()) {
                    mf.inputs.push_back(*normals);
                    norms = read_rat_rows(*normals);
                    rep = singular_scan(Q, sp, ctx.exec(), &norms);
                } else {
                    rep = singular_scan(Q, sp, ctx.exec(), nullptr);
                }
                if (rep.degree_warning)
                    std::cerr << "note: polynomial degree exceeds N; the scan regime "
                                 "is advisory\n";
                std::vector<std::vector<std::string>> rows;
                for (const auto& r : rep.rows)
                    rows.push_back({int_csv(r.v.v), double_csv(r.best_base),
                                    std::to_string(r.best_count),
                                    r.singular ? "1" : "0",
                                    r.certified_nonsingular ? "1" : "0",
                                    format_double(r.formula)});
                write_csv(ctx.path("scan.csv"),
                          {"direction", "best_line_base", "bisected_count", "singular",
                           "certified_nonsingular", "formula"},
                          rows);
                json j{{"N", rep.N},
                       {"epsilon", rep.epsilon},
                       {"H", rep.H},
                       {"bisect_fraction", rep.bisect_fraction},
                       {"cubes_per_axis", rep.cubes_per_axis},
                       {"threshold", rep.threshold},
                       {"certified_threshold", rep.certified_threshold},
                       {"degree_warning", rep.degree_warning},
                       {"sampled_directions", rep.sampled_directions},
                       {"singular_count", rep.singular_count}};
                write_json(ctx.path("scan.json"), j);
                mf.outputs = {ctx.path("scan.csv"), ctx.path("scan.json")};
                return 0;
            };
        });
    }

    // hairbrush
    {
        auto* sub = app.add_subcommand("hairbrush", "directions with long zero-cube lines");
        sub->fallthrough();
        auto poly = std::make_shared<std::string>();
        auto N = std::make_shared<long>(32);
        auto D = std::make_shared<int>(1);
        auto c = std::make_shared<double>(0.5);
        sub->add_option("--poly", *poly, "polynomial file")->required();
        sub->add_option("--N", *N, "grid scale")->capture_default_str();
        sub->add_option("--D", *D, "degree bound")->capture_default_str();
        sub->add_option("--c", *c, "line threshold factor")->capture_default_str();
        sub->callback([&, poly, N, D, c]() {
            run = [&, poly, N, D, c]() {
                mf.subcommand = "hairbrush";
                mf.params = {{"poly", *poly}, {"N", *N}, {"D", *D}, {"c", *c}};
                mf.inputs = {*poly};
                MultiPoly Q = read_poly(*poly);
                HairbrushReport rep =
                    hairbrush_direction_count(Q, *N, *D, *c, ctx.seed, ctx.exec());
                write_csv(ctx.path("hairbrush.csv"), {"N", "D", "count", "bound"},
                          {{std::to_string(rep.N), std::to_string(rep.D),
                            std::to_string(rep.qualifying), format_double(rep.bound)}});
                json j{{"N", rep.N},
                       {"D", rep.D},
                       {"c", rep.c},
                       {"directions_tested", rep.directions_tested},
                       {"qualifying", rep.qualifying},
                       {"bound", rep.bound},
                       {"within_bound", rep.within_bound}};
                write_json(ctx.path("hairbrush.json"), j);
                mf.outputs = {ctx.path("hairbrush.csv"), ctx.path("hairbrush.json")};
                return 0;
            };
        });
    }

    // quadric
    {
        auto* sub = app.add_subcommand("quadric", "lattice points and lines on Q = 1");
        sub->fallthrough();
        auto n = std::make_shared<std::size_t>(4);
        auto form = std::make_shared<std::string>();
        auto B = std::make_shared<long>(1);
        auto Vlo = std::make_shared<long>(0);
        auto Vhi = std::make_shared<long>(0);
        sub->add_option("--n", *n, "variables (hyperbolic default form)")
            ->capture_default_str();
        sub->add_option("--form", *form, "doubled Gram matrix, integer csv rows");
        sub->add_option("--B", *B, "point box sup-norm radius")->capture_default_str();
        sub->add_option("--Vlo", *Vlo, "direction band lower bound (0 skips lines)");
        sub->add_option("--Vhi", *Vhi, "direction band upper bound");
        sub->callback([&, n, form, B, Vlo, Vhi]() {
            run = [&, n, form, B, Vlo, Vhi]() {
                mf.subcommand = "quadric";
                mf.params = {{"n", *n}, {"form", *form}, {"B", *B}, {"Vlo", *Vlo}, {"Vhi", *Vhi}};
                QuadForm f;
                if (form->empty()) {
                    f = hyperbolic_form(*n);
                } else {
                    mf.inputs = {*form};
                    f = make_quad_form(read_int_rows(*form));
                }
                auto pts = enumerate_quadric_points(f, *B, ctx.exec());
                std::vector<Line> lns;
                if (*Vlo > 0) lns = enumerate_quadric_lines(f, *B, *Vlo, *Vhi, ctx.exec());
                bool ok = verify_quadric_config(f, pts, lns);
                {
                    std::string body;
                    for (const auto& x : pts) body += int_csv(x) + "\n";
                    write_text(ctx.path("qpoints.txt"), body);
                }
                write_lines(ctx.path("qlines.txt"), lns);
                json fm = json::array();
                for (const auto& row : f.gram2) fm.push_back(int_csv(row));
                json j{{"n", f.n},
                       {"B", *B},
                       {"Vlo", *Vlo},
                       {"Vhi", *Vhi},
                       {"norm", "sup"},
                       {"points", pts.size()},
                       {"lines", lns.size()},
                       {"verified", ok},
                       {"pos_inertia", f.pos_inertia},
                       {"neg_inertia", f.neg_inertia},
                       {"form", fm}};
                if (f.n >= 4) j["alpha"] = format_rational(quadric_alpha(f.n));
                write_json(ctx.path("quadric.json"), j);
                mf.outputs = {ctx.path("qpoints.txt"), ctx.path("qlines.txt"),
                              ctx.path("quadric.json")};
                return ok ? 0 : 3;
            };
        });
    }

    // fit
    {
        auto* sub = app.add_subcommand("fit", "log-log slope of (scale, count) samples");
        sub->fallthrough();
        auto pairs = std::make_shared<std::string>();
        auto in = std::make_shared<std::string>();
        sub->add_option("--pairs", *pairs, "inline samples, e.g. 2:8,4:64,8:512");
        sub->add_option("--in", *in, "CSV file with scale,count rows");
        sub->callback([&, pairs, in]() {
            run = [&, pairs, in]() {
                mf.subcommand = "fit";
                mf.params = {{"pairs", *pairs}, {"in", *in}};
                std::vector<std::pair<double, double>> samples;
                if (!pairs->empty()) {
                    std::stringstream ss(*pairs);
                    std::string item;
                    while (std::getline(ss, item, ',')) {
                        auto colon = item.find(':');
                        if (colon == std::string::npos)
                            throw ParseError("pairs must look like scale:count");
                        samples.push_back({std::stod(item.substr(0, colon)),
                                           std::stod(item.substr(colon + 1))});
                    }
                } else if (!in->empty()) {
                    mf.inputs = {*in};
                    std::istringstream f(read_text(*in));
                    std::string row;
                    while (std::getline(f, row)) {
                        auto comma = row.find(',');
                        if (comma == std::string::npos) continue;
                        try {
                            samples.push_back({std::stod(row.substr(0, comma)),
                                               std::stod(row.substr(comma + 1))});
                        } catch (const std::invalid_argument&) {
                            continue; // header row
                        }
                    }
                } else {
                    throw BadParams("need --pairs or --in");
                }
                FitResult r = fit_count_exponent(samples);
                json j{{"slope", r.slope},
                       {"intercept", r.intercept},
                       {"residual", r.residual},
                       {"samples", samples.size()}};
                write_json(ctx.path("fit.json"), j);
                mf.outputs = {ctx.path("fit.json")};
                return 0;
            };
        });
    }

    std::vector<std::string> args;
    try {
        args = merge_params(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::reverse(args.begin(), args.end()); // CLI11 consumes back to front
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!run) {
        std::cerr << app.help() << "\n";
        return 2;
    }
    if (ctx.threads > 0) omp_set_num_threads(ctx.threads);

    try {
        fs::create_directories(ctx.out);
        auto start = std::chrono::steady_clock::now();
        int code = run();
        auto stop = std::chrono::steady_clock::now();
        mf.seed = ctx.seed;
        mf.version = kVersion;
        mf.params["seed"] = ctx.seed;
        mf.params["serial"] = ctx.serial;
        mf.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        write_manifest(ctx.path("manifest.json"), mf);
        return code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

#include "topomap/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topomap/pipeline.hpp"
#include "topomap/render.hpp"

namespace topomap {

namespace fs = std::filesystem;

namespace {

struct CliOptions {
    std::string map_path;
    std::string yaml_path;
    std::string out_dir = ".";
    std::string config_path;
    std::string dump_filtered;
    std::string layers = "grid,semantic,openings,skeleton,nodes";
    bool svg = false;
    bool debug = false;
    int repeat = 1;
    PipelineConfig cfg;
};

void apply_config_file(const std::string& path, PipelineConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();

    auto set_key = [&](const std::string& key, double val) {
        if (key == "g_min") cfg.scan.g_min = int(val);
        else if (key == "n_dir") cfg.scan.n_dir = int(val);
        else if (key == "f_uk") cfg.scan.f_uk = int(val);
        else if (key == "g_dep") cfg.scan.g_dep = int(val);
        else if (key == "f_obj") cfg.filter.f_obj = int(val);
        else if (key == "d_w") cfg.cleanup.d_w = val;
        else if (key == "s_o") cfg.cleanup.s_o = int(val);
        else if (key == "s_c") cfg.cleanup.s_c = int(val);
        else if (key == "r_min") cfg.r_min = val;
        else if (key == "prune_length") cfg.baseline.prune_length = int(val);
        else if (key == "clearance_width") cfg.skeleton.clearance_width = int(val);
        else if (key == "threads") cfg.threads = int(val);
        else throw FormatError("unknown config key '" + key + "'");
    };

    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j = nlohmann::json::parse(text);
        for (auto& [key, val] : j.items()) set_key(key, val.get<double>());
        return;
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(val);
        if (key.empty()) continue;
        try {
            set_key(key, std::stod(val));
        } catch (const std::invalid_argument&) {
            throw FormatError("bad value for config key '" + key + "'");
        }
    }
}

OccupancyGrid load_input(const CliOptions& opt) {
    fs::path p(opt.map_path);
    if (p.extension() == ".pgm") {
        std::string yaml = opt.yaml_path;
        if (yaml.empty()) yaml = (fs::path(p).replace_extension(".yaml")).string();
        return load_pgm_yaml(opt.map_path, yaml);
    }
    return load_ascii_file(opt.map_path);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << content;
}

RenderLayers parse_layers(const std::string& csv) {
    RenderLayers l{false, false, false, false, false};
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "grid") l.grid = true;
        else if (item == "semantic") l.semantic = true;
        else if (item == "openings") l.openings = true;
        else if (item == "skeleton") l.skeleton = true;
        else if (item == "nodes") l.nodes = true;
        else if (!item.empty()) throw FormatError("unknown layer '" + item + "'");
    }
    return l;
}

void add_common(CLI::App* sub, CliOptions& opt) {
    sub->add_option("map", opt.map_path, "input map (.txt ascii or .pgm)")->required();
    sub->add_option("--yaml", opt.yaml_path, "yaml sidecar for .pgm input");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--config", opt.config_path, "config file (key=value or json)");
    sub->add_option("--g_min", opt.cfg.scan.g_min, "min traversable gap span, cells");
    sub->add_option("--n_dir", opt.cfg.scan.n_dir, "number of scan directions");
    sub->add_option("--f_uk", opt.cfg.scan.f_uk, "max absorbed unknown run, cells");
    sub->add_option("--g_dep", opt.cfg.scan.g_dep, "min connected-gap chain depth");
    sub->add_option("--f_obj", opt.cfg.filter.f_obj, "object removal contour threshold, cells");
    sub->add_option("--d_w", opt.cfg.cleanup.d_w, "duplicate-test distance weight");
    sub->add_option("--s_o", opt.cfg.cleanup.s_o, "overlap resolution contour steps");
    sub->add_option("--s_c", opt.cfg.cleanup.s_c, "duplicate search contour steps");
    sub->add_option("--r_min", opt.cfg.r_min, "robot working width, metres (overrides g_min)");
    sub->add_option("--prune_length", opt.cfg.baseline.prune_length, "RGVG spur pruning, cells");
    sub->add_option("--clearance-width", opt.cfg.skeleton.clearance_width,
                    "swept-rectangle width for straight-path tests, cells");
    sub->add_option("--threads", opt.cfg.threads, "worker cap for the direction scans");
    sub->add_option("--dump-filtered", opt.dump_filtered, "write the filtered grid here");
}

int do_analyze(const CliOptions& opt, bool with_svg, const std::string& layers_csv) {
    OccupancyGrid grid = load_input(opt);
    AnalysisResult res = analyze_grid(grid, opt.cfg);
    if (auto bad = validate_analysis(res)) {
        std::cerr << "pipeline invariant violation: " << *bad << "\n";
        return 3;
    }

    fs::create_directories(opt.out_dir);
    fs::path out(opt.out_dir);
    write_file(out / "semantic.json", semantic_json(res, opt.cfg, grid));
    write_file(out / "graph.json", graph_json(res.graph));
    write_file(out / "graph.dot", graph_dot(res.graph));
    write_file(out / "metrics.json", metrics_json(res, opt.cfg));
    write_file(out / "timings.json", timings_json(res.timings));
    if (!opt.dump_filtered.empty()) {
        fs::path dump(opt.dump_filtered);
        if (dump.extension() == ".pgm") save_pgm(res.filtered, dump.string());
        else save_ascii_file(res.filtered, dump.string());
    }
    if (opt.debug) write_file(out / "debug.json", debug_json(res));
    if (with_svg)
        write_file(out / "map.svg", render_svg(res.filtered, res, parse_layers(layers_csv)));

    std::cout << "nodes=" << res.graph.node_count()
              << " intersections=" << res.semantic.intersections.size()
              << " pathways=" << res.semantic.pathways.size()
              << " openings=" << res.semantic.openings.size() << "\n";
    return 0;
}

int do_compare(const CliOptions& opt) {
    OccupancyGrid grid = load_input(opt);
    auto rows = compare_methods(grid, opt.cfg);
    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "compare.csv", compare_csv(rows));
    std::cout << "method  nodes  seconds\n";
    for (const CompareRow& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-7s %6zu  %.6f\n", r.method.c_str(), r.nodes, r.seconds);
        std::cout << buf;
    }
    return 0;
}

int do_bench(const CliOptions& opt) {
    OccupancyGrid grid = load_input(opt);
    int n = std::max(1, opt.repeat);
    std::vector<StageTimings> runs;
    AnalysisResult last;
    for (int k = 0; k < n; ++k) {
        last = analyze_grid(grid, opt.cfg);
        runs.push_back(last.timings);
    }
    // median per stage
    StageTimings med;
    if (!runs.empty()) {
        for (size_t s = 0; s < runs[0].stages.size(); ++s) {
            std::vector<double> vals;
            for (auto& r : runs) vals.push_back(r.stages[s].second);
            std::sort(vals.begin(), vals.end());
            med.stages.emplace_back(runs[0].stages[s].first, vals[vals.size() / 2]);
        }
        std::vector<double> totals;
        for (auto& r : runs) totals.push_back(r.total);
        std::sort(totals.begin(), totals.end());
        med.total = totals[totals.size() / 2];
    }
    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "timings.json", timings_json(med));
    std::cout << "runs=" << n << " median_total=" << med.total << "s nodes="
              << last.graph.node_count() << "\n";
    for (auto& [name, sec] : med.stages) std::cout << "  " << name << ": " << sec << "s\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"occupancy-grid intersection mapping"};
    app.require_subcommand(1);

    CliOptions a_opt, c_opt, r_opt, b_opt;
    CLI::App* analyze = app.add_subcommand("analyze", "semantic map + skeleton graph");
    add_common(analyze, a_opt);
    bool a_svg = false;
    analyze->add_flag("--svg", a_svg, "also render map.svg");
    analyze->add_flag("--debug-dump", a_opt.debug,
                      "write debug.json (detections, refinements, cleanup events)");
    analyze->add_option("--layers", a_opt.layers, "svg layers (csv)");

    CLI::App* compare = app.add_subcommand("compare", "PM vs GVG/RGVG node counts");
    add_common(compare, c_opt);

    CLI::App* render = app.add_subcommand("render", "render map.svg");
    add_common(render, r_opt);
    render->add_option("--layers", r_opt.layers, "svg layers (csv)");

    CLI::App* bench = app.add_subcommand("bench", "repeat analyze, median timings");
    add_common(bench, b_opt);
    bench->add_option("--repeat", b_opt.repeat, "number of runs");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        CliOptions* opt = analyze->parsed() ? &a_opt
                        : compare->parsed() ? &c_opt
                        : render->parsed() ? &r_opt
                                           : &b_opt;
        if (!opt->config_path.empty()) {
            PipelineConfig file_cfg;
            apply_config_file(opt->config_path, file_cfg);
            // flags override the file: re-parse by merging defaults
            PipelineConfig defaults;
            auto pick = [](auto flag_val, auto def_val, auto file_val) {
                return flag_val != def_val ? flag_val : file_val;
            };
            PipelineConfig& c = opt->cfg;
            c.scan.g_min = pick(c.scan.g_min, defaults.scan.g_min, file_cfg.scan.g_min);
            c.scan.n_dir = pick(c.scan.n_dir, defaults.scan.n_dir, file_cfg.scan.n_dir);
            c.scan.f_uk = pick(c.scan.f_uk, defaults.scan.f_uk, file_cfg.scan.f_uk);
            c.scan.g_dep = pick(c.scan.g_dep, defaults.scan.g_dep, file_cfg.scan.g_dep);
            c.filter.f_obj = pick(c.filter.f_obj, defaults.filter.f_obj, file_cfg.filter.f_obj);
            c.cleanup.d_w = pick(c.cleanup.d_w, defaults.cleanup.d_w, file_cfg.cleanup.d_w);
            c.cleanup.s_o = pick(c.cleanup.s_o, defaults.cleanup.s_o, file_cfg.cleanup.s_o);
            c.cleanup.s_c = pick(c.cleanup.s_c, defaults.cleanup.s_c, file_cfg.cleanup.s_c);
            c.r_min = pick(c.r_min, defaults.r_min, file_cfg.r_min);
            c.baseline.prune_length = pick(c.baseline.prune_length, defaults.baseline.prune_length,
                                           file_cfg.baseline.prune_length);
            c.skeleton.clearance_width =
                pick(c.skeleton.clearance_width, defaults.skeleton.clearance_width,
                     file_cfg.skeleton.clearance_width);
            c.threads = pick(c.threads, defaults.threads, file_cfg.threads);
        }

        if (analyze->parsed()) return do_analyze(a_opt, a_svg, a_opt.layers);
        if (compare->parsed()) return do_compare(c_opt);
        if (render->parsed()) {
            OccupancyGrid grid = load_input(r_opt);
            AnalysisResult res = analyze_grid(grid, r_opt.cfg);
            fs::create_directories(r_opt.out_dir);
            write_file(fs::path(r_opt.out_dir) / "map.svg",
                       render_svg(res.filtered, res, parse_layers(r_opt.layers)));
            std::cout << "wrote map.svg\n";
            return 0;
        }
        if (bench->parsed()) return do_bench(b_opt);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TraceError& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace topomap

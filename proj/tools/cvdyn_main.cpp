#include <cvdyn/errors.hpp>
#include <cvdyn/experiments.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using cvdyn::cli::ExperimentConfig;
using cvdyn::cli::Table;
using nlohmann::json;

struct Common {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string model;
    double r0_m = 0.0;
    double mass_kg = 0.0;
    double distance_m = 0.0;
    double t_max_s = 0.0;
    int samples = 0;
    int threads = 0;
    CLI::Option* o_model = nullptr;
    CLI::Option* o_r0 = nullptr;
    CLI::Option* o_mass = nullptr;
    CLI::Option* o_dist = nullptr;
    CLI::Option* o_tmax = nullptr;
    CLI::Option* o_samples = nullptr;
    CLI::Option* o_threads = nullptr;

    void attach(CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--format", format, "table output format")
            ->check(CLI::IsMember({"csv", "json"}));
        o_model = sub->add_option("--model", model, "newton, naive or td");
        o_r0 = sub->add_option("--r0-m", r0_m, "regularization length, m");
        o_mass = sub->add_option("--mass-kg", mass_kg, "particle mass, kg");
        o_dist = sub->add_option("--distance-m", distance_m, "pair separation, m");
        o_tmax = sub->add_option("--t-max-s", t_max_s, "time grid endpoint, s");
        o_samples = sub->add_option("--samples", samples, "time grid sample count");
        o_threads = sub->add_option("--threads", threads, "worker threads");
    }

    ExperimentConfig config() const {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw std::invalid_argument("config: cannot open '" + config_path + "'");
            in >> j;
        }
        if (o_model->count())
            j["scenario"]["model"] = model;
        if (o_r0->count())
            j["scenario"]["r0_m"] = r0_m;
        if (o_mass->count())
            j["scenario"]["mass_kg"] = mass_kg;
        if (o_dist->count())
            j["scenario"]["distance_m"] = distance_m;
        if (o_tmax->count())
            j["time_grid"]["t_max_s"] = t_max_s;
        if (o_samples->count())
            j["time_grid"]["samples"] = samples;
        if (o_threads->count())
            j["threads"] = threads;
        return cvdyn::cli::config_from_json(j);
    }
};

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot open output file '" + path + "'");
    out << text;
}

std::string render_table(const Table& t, const std::string& format) {
    if (format == "json")
        return cvdyn::cli::table_to_json(t).dump(2) + "\n";
    std::ostringstream os;
    cvdyn::cli::write_csv(t, os);
    return os.str();
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian pair dynamics for a released optomechanical pair"};
    app.require_subcommand(1);

    CLI::App* c_criterion =
        app.add_subcommand("criterion", "entanglement-generation verdict for the scenario");
    CLI::App* c_fig1 = app.add_subcommand("fig1", "bare vs collapse-noise trajectories");
    CLI::App* c_fig2 =
        app.add_subcommand("fig2", "regulated trajectories and the radius sweep");
    CLI::App* c_fig3 = app.add_subcommand("fig3", "detection-band compatibility sweep");
    CLI::App* c_scan = app.add_subcommand("scan", "full radius/time sweep");
    CLI::App* c_validate = app.add_subcommand("validate", "check a config and echo scales");

    Common common[6];
    CLI::App* subs[6] = {c_criterion, c_fig1, c_fig2, c_fig3, c_scan, c_validate};
    for (int i = 0; i < 6; ++i)
        common[i].attach(subs[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        int which = 0;
        for (int i = 0; i < 6; ++i)
            if (subs[i]->parsed())
                which = i;
        const Common& c = common[which];
        const ExperimentConfig cfg = c.config();

        if (subs[which] == c_criterion) {
            write_text(cvdyn::cli::run_criterion(cfg).dump(2) + "\n", c.out_path);
        } else if (subs[which] == c_fig1) {
            write_text(render_table(cvdyn::cli::run_fig1(cfg), c.format), c.out_path);
        } else if (subs[which] == c_fig2) {
            const Table top = cvdyn::cli::run_fig2_top(cfg);
            const Table bottom = cvdyn::cli::run_fig2_bottom(cfg);
            if (c.out_path.empty()) {
                if (c.format == "json") {
                    json j;
                    j["top"] = cvdyn::cli::table_to_json(top);
                    j["bottom"] = cvdyn::cli::table_to_json(bottom);
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << render_table(top, c.format) << "\n"
                              << render_table(bottom, c.format);
                }
            } else {
                write_text(render_table(top, c.format), with_suffix(c.out_path, "_top"));
                write_text(render_table(bottom, c.format),
                           with_suffix(c.out_path, "_bottom"));
            }
        } else if (subs[which] == c_fig3) {
            write_text(render_table(cvdyn::cli::run_fig3(cfg), c.format), c.out_path);
        } else if (subs[which] == c_scan) {
            write_text(render_table(cvdyn::cli::run_scan(cfg), c.format), c.out_path);
        } else {
            write_text(cvdyn::cli::run_validate(cfg).dump(2) + "\n", c.out_path);
        }
        return 0;
    } catch (const cvdyn::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const cvdyn::NumericalInconsistency& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

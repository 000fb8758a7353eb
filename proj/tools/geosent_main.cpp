#include "geosent/core/error.hpp"
#include "geosent/core/timestamp.hpp"
#include "geosent/pipeline/config.hpp"
#include "geosent/pipeline/stages.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::string run_dir;
    std::optional<std::uint64_t> seed;
    std::string backend;
    std::string adapter;
    std::optional<double> resolution;
    std::string start;
    std::string end;
    std::optional<std::size_t> sample_size;
    std::string sample_mode;
};

geosent::Timestamp parse_time_flag(const std::string& name, const std::string& value) {
    try {
        return geosent::parse_rfc3339(value);
    } catch (const std::exception& e) {
        throw geosent::ConfigError("--" + name + ": " + e.what());
    }
}

void apply(const Overrides& o, geosent::pipeline::Config& c) {
    using geosent::ConfigError;
    using geosent::pipeline::Backend;
    if (!o.run_dir.empty()) c.run_dir = o.run_dir;
    if (o.seed) c.seed = *o.seed;
    if (!o.backend.empty()) c.backend = o.backend == "external" ? Backend::external : Backend::baseline;
    if (!o.adapter.empty()) c.adapter = o.adapter;
    if (o.resolution) {
        if (!(*o.resolution > 0.0)) throw ConfigError("--resolution must be positive");
        c.resolution = *o.resolution;
    }
    if (!o.start.empty()) c.window_start = parse_time_flag("start", o.start);
    if (!o.end.empty()) c.window_end = parse_time_flag("end", o.end);
    if (c.window_start && c.window_end && *c.window_end < *c.window_start) {
        throw ConfigError("date window end precedes its start");
    }
    if (o.sample_size) c.sample_size = *o.sample_size;
    if (!o.sample_mode.empty()) c.sample_mode = o.sample_mode;
    if (c.backend == Backend::external && c.adapter.empty()) throw ConfigError("external backend needs an adapter address");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regional sentiment pipeline for geolocated social media posts"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;
    app.add_option("-c,--config", config_path, "Pipeline configuration file (JSON)")->required();
    app.add_option("--run-dir", overrides.run_dir, "Run directory for artifacts");
    app.add_option("--seed", overrides.seed, "Seed for every random choice");
    app.add_option("--backend", overrides.backend, "Classifier backend")->check(CLI::IsMember({"baseline", "external"}));
    app.add_option("--adapter", overrides.adapter, "Adapter address: exec:<command> or tcp:<host>:<port>");
    app.add_option("--resolution", overrides.resolution, "Modularity resolution");
    app.add_option("--start", overrides.start, "Date window start (RFC 3339)");
    app.add_option("--end", overrides.end, "Date window end (RFC 3339)");
    app.add_option("--sample-size", overrides.sample_size, "Posts per annotation sample");
    app.add_option("--sample-mode", overrides.sample_mode, "Annotation sample mode")
        ->check(CLI::IsMember({"lowest_margin", "random"}));

    std::string selected;
    for (const auto& stage : geosent::pipeline::stage_names()) {
        app.add_subcommand(stage, "Run the " + stage + " stage")->callback([&selected, stage] { selected = stage; });
    }
    app.add_subcommand("all", "Run every stage in order")->callback([&selected] { selected = "all"; });
    app.add_subcommand("fetch", "Download posts from the search API into the corpus path")
        ->callback([&selected] { selected = "fetch"; });
    app.fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(geosent::ErrorKind::config);
    }

    try {
        auto config = geosent::pipeline::load_config(config_path);
        apply(overrides, config);
        if (selected == "all") {
            geosent::pipeline::run_all(config, std::cerr);
        } else if (selected == "fetch") {
            geosent::pipeline::run_fetch(config, std::cerr);
        } else {
            geosent::pipeline::run_stage(selected, config, std::cerr);
        }
    } catch (const geosent::Error& e) {
        std::cerr << "error (" << geosent::to_string(e.kind()) << "): " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error (input): " << e.what() << '\n';
        return static_cast<int>(geosent::ErrorKind::input);
    }
    return 0;
}

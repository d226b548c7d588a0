#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dualwin/channel.hpp"
#include "dualwin/error.hpp"
#include "dualwin/ofdm_frame.hpp"
#include "dualwin/periodogram.hpp"
#include "dualwin/rng.hpp"
#include "dualwin/sweep.hpp"
#include "dualwin/windows.hpp"

namespace dualwin::cli {

namespace {

constexpr std::size_t full_scale_trials = 5000;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<double> snr_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) fail(ErrorCode::invalid_argument, "--snr-step must be positive");
    if (!(hi >= lo)) fail(ErrorCode::invalid_argument, "--snr-max must not be below --snr-min");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

SeparationRule parse_separation(const std::string& s) {
    if (s == "both") return SeparationRule::both_axes;
    if (s == "either") return SeparationRule::either_axis;
    fail(ErrorCode::invalid_argument, "unknown separation rule '" + s + "' (expected both|either)");
}

// Flat key = value file -> "--key=value" tokens for the named subcommand.
// Underscores in keys are accepted as dashes.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::io_failure, "cannot read config file '" + path + "'");
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(f);
    } catch (const CLI::ParseError& e) {
        fail(ErrorCode::invalid_argument, "config file '" + path + "': " + e.what());
    }
    std::vector<std::string> out;
    for (const auto& item : items) {
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == "default"))
            fail(ErrorCode::invalid_argument, "config file '" + path + "': sections are not supported");
        std::string key = item.name;
        for (auto& c : key)
            if (c == '_') c = '-';
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

// Moves a "--config <path>" given after the subcommand name into the token
// stream ahead of the command-line flags, so flags override file values.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    if (args.size() < 2) return args;
    std::vector<std::string> rest(args.begin() + 2, args.end());
    std::optional<std::string> path;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == "--config" && i + 1 < rest.size()) {
            path = rest[i + 1];
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i), rest.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (rest[i].rfind("--config=", 0) == 0) {
            path = rest[i].substr(9);
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path) return args;
    std::vector<std::string> out{args[0], args[1]};
    for (auto& t : config_tokens(*path)) out.push_back(std::move(t));
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

struct SweepArgs {
    double snr_min = -40.0;
    double snr_max = 0.0;
    double snr_step = 5.0;
    std::size_t trials = 500;
    std::size_t targets = 3;
    double epsilon = 10.0;
    std::uint64_t seed = 1;
    std::string strategies = "bstc_resolution,bstc_sidelobe,cstc,adaptive";
    std::string out;
    std::size_t timing_repeats = 0;
    std::size_t timing_trials = 0;
    std::size_t workers = 0;
    bool full_paper_scale = false;
    bool noiseless = false;
    double amplitude_exponent = ChannelModel{}.amplitude_exponent;
    double mask_level_db = DetectorOptions{}.mask_level_db;
    std::string res_window = "rectangular";
    std::string side_window = "chebyshev80";
    std::string separation = "both";
    bool quiet = false;
};

struct ProfileArgs {
    std::string windows = "rectangular,hamming,chebyshev80";
    std::size_t oversample = 16;
    std::vector<std::size_t> lengths;
};

struct DumpArgs {
    std::uint64_t seed = 1;
    std::size_t targets = 3;
    double snr_db = 0.0;
    bool noiseless = false;
    std::string window = "rectangular";
    double amplitude_exponent = ChannelModel{}.amplitude_exponent;
    std::string out;
};

void add_common_config(CLI::App* sub) {
    // Parsed before CLI11 sees the arguments; registered for --help only.
    sub->add_option("--config", "Flat key = value file; keys are flag names without the leading dashes");
}

int do_sweep(const SweepArgs& a, bool trials_given, std::ostream& out) {
    SweepConfig cfg;
    cfg.snr_grid_db = snr_grid(a.snr_min, a.snr_max, a.snr_step);
    cfg.trials = a.full_paper_scale && !trials_given ? full_scale_trials : a.trials;
    cfg.scene.count = a.targets;
    cfg.scene.separation = parse_separation(a.separation);
    cfg.epsilon = a.epsilon;
    cfg.seed = a.seed;
    cfg.strategies.clear();
    for (const auto& s : split_list(a.strategies)) cfg.strategies.push_back(parse_detector_tag(s));
    cfg.timing_repeats = a.timing_repeats;
    cfg.timing_trials = a.timing_trials;
    cfg.workers = a.workers;
    cfg.noiseless = a.noiseless;
    cfg.channel.amplitude_exponent = a.amplitude_exponent;
    cfg.detector.mask_level_db = a.mask_level_db;
    cfg.resolution_window = WindowKind::parse(a.res_window);
    cfg.sidelobe_window = WindowKind::parse(a.side_window);
    cfg.output_path = a.out;
    cfg.validate();
    if (!(a.amplitude_exponent > 0.0)) fail(ErrorCode::invalid_argument, "--amplitude-exponent must be positive");

    const auto records = run_sweep(cfg);
    const auto order = cfg.ordered_strategies();
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        write_csv(out, records, order);
    } else {
        emit_csv(records, order, cfg.output_path);
        if (!a.quiet) out << "wrote " << records.size() << " rows to " << cfg.output_path << "\n";
    }
    return 0;
}

int do_profile(const ProfileArgs& a, std::ostream& out) {
    const auto cfg = OfdmConfig::standard();
    auto lengths = a.lengths;
    if (lengths.empty()) lengths = {cfg.n_subcarriers, cfg.n_symbols};
    std::vector<WindowKind> kinds;
    for (const auto& w : split_list(a.windows)) kinds.push_back(WindowKind::parse(w));
    if (kinds.empty()) fail(ErrorCode::invalid_argument, "no windows requested");

    const WindowProfile rect_ref = profile_window(WindowKind::rectangular(), lengths.front(), a.oversample);
    out << std::left << std::setw(14) << "window" << std::right << std::setw(8) << "length" << std::setw(10)
        << "psl_db" << std::setw(14) << "halfwidth" << std::setw(12) << "width_x" << std::setw(12)
        << "ripple_db" << "\n";
    out << std::fixed;
    for (auto len : lengths) {
        const auto rect = len == lengths.front() ? rect_ref : profile_window(WindowKind::rectangular(), len, a.oversample);
        for (const auto& k : kinds) {
            const auto p = profile_window(k, len, a.oversample);
            const double ratio = static_cast<double>(p.mainlobe_halfwidth_bins) /
                                 static_cast<double>(rect.mainlobe_halfwidth_bins);
            out << std::left << std::setw(14) << k.tag() << std::right << std::setw(8) << len << std::setw(10)
                << std::setprecision(2) << p.psl_db << std::setw(14) << p.mainlobe_halfwidth_bins << std::setw(12)
                << std::setprecision(2) << ratio << std::setw(12) << std::setprecision(3) << p.sidelobe_ripple_db
                << "\n";
        }
    }
    out << "halfwidth in bins of a " << a.oversample << "x padded transform; width_x relative to rectangular\n";
    return 0;
}

int do_dump(const DumpArgs& a, std::ostream& out, std::ostream& err) {
    const auto cfg = OfdmConfig::standard();
    SceneConstraints sc;
    sc.count = a.targets;
    ChannelModel model;
    model.amplitude_exponent = a.amplitude_exponent;
    if (!(model.amplitude_exponent > 0.0)) fail(ErrorCode::invalid_argument, "--amplitude-exponent must be positive");
    const auto scene = sample_scene(cfg, sc, derive_seed(a.seed, {stream::scene, 0}));
    const auto ftx = generate_frame(cfg, derive_seed(a.seed, {stream::frame, 0}));
    std::optional<NoiseSpec> noise;
    if (!a.noiseless) noise = calibrate_noise(a.snr_db, cfg, model);
    const auto frx = synthesize_received(ftx, scene, noise, cfg, derive_seed(a.seed, {stream::noise, 0}), model);
    const auto map = compute_map(normalize(frx, ftx), window_matrix(WindowKind::parse(a.window), cfg), cfg);

    auto& log = (a.out.empty() || a.out == "-") ? err : out;
    for (const auto& t : scene.targets)
        log << "target range_m " << t.range_m << " velocity_mps " << t.velocity_mps << "\n";
    if (a.out.empty() || a.out == "-") {
        write_map(out, map);
    } else {
        std::ofstream f(a.out);
        if (!f) fail(ErrorCode::io_failure, "cannot open '" + a.out + "' for writing");
        write_map(f, map);
        f.flush();
        if (!f) fail(ErrorCode::io_failure, "write to '" + a.out + "' failed");
        out << "wrote " << map.power.rows() << "x" << map.power.cols() << " map to " << a.out << "\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dual-window adaptive multi-target detection for OFDM radar"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo SNR sweep; writes one CSV row per SNR point");
    sweep->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    add_common_config(sweep);
    sweep->add_option("--snr-min", sa.snr_min, "Lowest SNR point in dB")->capture_default_str();
    sweep->add_option("--snr-max", sa.snr_max, "Highest SNR point in dB")->capture_default_str();
    sweep->add_option("--snr-step", sa.snr_step, "SNR spacing in dB")->capture_default_str();
    auto* trials_opt = sweep->add_option("--trials", sa.trials, "Trials per SNR point")->capture_default_str();
    sweep->add_option("--targets", sa.targets, "Targets per scene")->capture_default_str();
    sweep->add_option("--epsilon", sa.epsilon, "Matching threshold in m^2 + (m/s)^2")->capture_default_str();
    sweep->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
    sweep->add_option("--strategies", sa.strategies, "Comma-separated subset of strategies")->capture_default_str();
    sweep->add_option("--out", sa.out, "CSV output path; stdout if omitted or '-'");
    sweep->add_option("--timing-repeats", sa.timing_repeats,
                      "Separate serial timing pass with this many repeats per call (0: time inline, serially)")
        ->capture_default_str();
    sweep->add_option("--timing-trials", sa.timing_trials, "Trials per SNR point in the timing pass (0: all)")
        ->capture_default_str();
    sweep->add_option("--workers", sa.workers, "Threads for the statistics pass (0: hardware concurrency)")
        ->capture_default_str();
    sweep->add_flag("--full-paper-scale", sa.full_paper_scale, "Use 5000 trials unless --trials is given");
    sweep->add_flag("--noiseless", sa.noiseless, "Disable receiver noise");
    sweep->add_option("--amplitude-exponent", sa.amplitude_exponent, "Echo amplitude ~ R^-p; 2 is the radar equation")
        ->capture_default_str();
    sweep->add_option("--mask-level-db", sa.mask_level_db, "BSTC mask edge below the window's peak")
        ->capture_default_str();
    sweep->add_option("--res-window", sa.res_window, "Resolution-optimized window")->capture_default_str();
    sweep->add_option("--side-window", sa.side_window, "Sidelobe-optimized window")->capture_default_str();
    sweep->add_option("--separation", sa.separation, "Scene separation rule: both|either")->capture_default_str();
    sweep->add_flag("--quiet", sa.quiet, "No status line when writing to a file");

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile-windows", "Print PSL, mainlobe width and ripple per window");
    profile->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    add_common_config(profile);
    profile->add_option("--windows", pa.windows, "Comma-separated window tags")->capture_default_str();
    profile->add_option("--oversample", pa.oversample, "Transform padding factor (>= 4)")->capture_default_str();
    profile->add_option("--length", pa.lengths, "Window lengths (default: N and M)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->delimiter(',');

    DumpArgs da;
    auto* dump = app.add_subcommand("dump-map", "Write one range-Doppler periodogram grid");
    dump->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    add_common_config(dump);
    dump->add_option("--seed", da.seed, "Master seed")->capture_default_str();
    dump->add_option("--targets", da.targets, "Targets in the scene")->capture_default_str();
    dump->add_option("--snr", da.snr_db, "SNR in dB")->capture_default_str();
    dump->add_flag("--noiseless", da.noiseless, "Disable receiver noise");
    dump->add_option("--window", da.window, "Window tag")->capture_default_str();
    dump->add_option("--amplitude-exponent", da.amplitude_exponent, "Echo amplitude ~ R^-p")->capture_default_str();
    dump->add_option("--out", da.out, "Output path; stdout if omitted or '-'");

    try {
        auto args = expand_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        try {
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e, out, err);
            return rc == 0 ? 0 : 2;
        }
        if (*sweep) return do_sweep(sa, trials_opt->count() > 0, out);
        if (*profile) return do_profile(pa, out);
        if (*dump) return do_dump(da, out, err);
        return 2;
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dualwin::cli

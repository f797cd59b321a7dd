// Command-line front end: rollout, batch, evaluate, transfer, landscape, regenerate.
// Exit codes: 0 success, 2 validation error, 3 I/O error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ibench/ibench.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::optional<double> setpoint;
    std::vector<double> setpoints;
    int steps = -1;
    std::string policy = "random";
    std::string format = "csv";
    std::string out;
    std::string config_path;
    bool debug_latents = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ibench::IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to --out, or stdout when it is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ibench::IoError("cannot open for writing: " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw ibench::IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> chosen_setpoints(const CommonOptions& o, std::vector<double> fallback) {
    if (!o.setpoints.empty()) return o.setpoints;
    if (o.setpoint) return {*o.setpoint};
    return fallback;
}

std::vector<double> protocol_setpoints() { return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}; }

int run_rollout(const CommonOptions& o) {
    ibench::EnvConfig config;
    if (!o.config_path.empty()) config = ibench::parse_config(read_file(o.config_path));
    if (o.seed) config.seed = *o.seed;
    if (o.setpoint) config.setpoint = *o.setpoint;
    ibench::Environment env(config);
    auto policy = ibench::BehaviorPolicy::parse(o.policy);
    policy.seed(ibench::policy_seed_for(config.seed));

    Output out(o.out);
    ibench::write_rollout(out.stream(), env, policy, o.steps < 0 ? 200 : o.steps, o.debug_latents);
    out.finish();
    return 0;
}

int run_batch(const CommonOptions& o, bool parallel) {
    const auto policy = ibench::BehaviorPolicy::parse(o.policy);
    const auto format = ibench::parse_format(o.format);
    ibench::GenerateOptions go;
    go.parallel = parallel;
    const auto batch = ibench::generate_batch(chosen_setpoints(o, protocol_setpoints()),
                                              o.steps < 0 ? 1000 : o.steps, policy, o.seed.value_or(0), go);
    ibench::export_batch(batch, format, o.out);
    std::cerr << batch.records.size() << " records written to " << o.out << '\n';
    return 0;
}

nlohmann::json summary_json(const ibench::RewardSummary& s) {
    nlohmann::json j{{"mean", s.mean}, {"std", s.stddev}, {"episode_means", s.episode_means}};
    if (!std::isnan(s.setpoint)) j["setpoint"] = s.setpoint;
    return j;
}

int run_evaluate(const CommonOptions& o, const ibench::EvaluationOptions& eval) {
    const auto policy = ibench::BehaviorPolicy::parse(o.policy);
    const auto summary =
        ibench::evaluate_policy(policy, chosen_setpoints(o, protocol_setpoints()), o.seed.value_or(0), eval);
    nlohmann::json j{{"policy", policy.descriptor()},
                     {"horizon", eval.horizon},
                     {"episodes", eval.episodes},
                     {"init", eval.init == ibench::InitMode::Start ? "start" : "random"},
                     {"aggregate", summary_json(summary.aggregate)},
                     {"per_setpoint", nlohmann::json::array()}};
    for (const auto& s : summary.per_setpoint) j["per_setpoint"].push_back(summary_json(s));
    Output out(o.out);
    out.stream() << j.dump(2) << '\n';
    out.finish();
    return 0;
}

int run_transfer(const CommonOptions& o, double source_p, int source_n, double target_p, int target_n) {
    const auto policy = ibench::BehaviorPolicy::parse(o.policy);
    const auto format = ibench::parse_format(o.format);
    const auto [source, target] =
        ibench::transfer_layout(source_p, source_n, target_p, target_n, o.seed.value_or(0), policy);
    const std::string ext = std::string(".") + ibench::format_name(format);
    ibench::export_batch(source, format, o.out + ".source" + ext);
    ibench::export_batch(target, format, o.out + ".target" + ext);
    std::cerr << source.records.size() << " source and " << target.records.size() << " target records written\n";
    return 0;
}

int run_landscape(const CommonOptions& o, double step) {
    if (!(step > 0.0 && step <= 3.0)) throw ibench::ValidationError("--step must lie in (0, 3]");
    Output out(o.out);
    auto& os = out.stream();
    os << "phi,h_e,m\n";
    const auto n = static_cast<int>(std::llround(3.0 / step));
    std::string line;
    for (int phi = -ibench::kDirectionBound; phi <= ibench::kDirectionBound; ++phi) {
        for (int i = 0; i <= n; ++i) {
            const double h_e = std::min(1.5, -1.5 + i * step);
            line = std::to_string(phi) + ",";
            ibench::detail::append_number(line, h_e);
            line.push_back(',');
            ibench::detail::append_number(line, ibench::miscal_penalty(phi, h_e));
            os << line << '\n';
        }
    }
    out.finish();
    return 0;
}

int run_regenerate(const std::string& in, const CommonOptions& o) {
    const auto original = ibench::import_batch(in);
    const auto again = ibench::regenerate_batch(original.metadata);
    if (!(again.records == original.records)) {
        std::cerr << "regenerated batch differs from " << in << '\n';
        return kExitValidation;
    }
    if (!o.out.empty()) ibench::export_batch(again, ibench::parse_format(o.format), o.out);
    std::cerr << "regenerated " << again.records.size() << " records bit-exactly\n";
    return 0;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_format, bool needs_out) {
    cmd->add_option("--seed", o.seed, "Base seed (u64)");
    auto* single = cmd->add_option("--setpoint", o.setpoint, "Single setpoint in [0,100]");
    auto* many = cmd->add_option("--setpoints", o.setpoints, "Comma separated setpoints")->delimiter(',');
    single->excludes(many);
    cmd->add_option("--policy", o.policy, "random | safe[:amp,noise,h_e] | constant:dv,dg,dh");
    cmd->add_option("--config", o.config_path, "JSON environment config");
    cmd->add_flag("--debug-latents", o.debug_latents, "Append latent state columns");
    if (with_format)
        cmd->add_option("--format", o.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    auto* out = cmd->add_option("--out", o.out, "Output path");
    if (needs_out) out->required();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Industrial benchmark simulator and batch-data tooling"};
    app.require_subcommand(1);

    CommonOptions o;
    bool parallel = false;
    ibench::EvaluationOptions eval;
    std::string init = "start";
    double source_p = 50, target_p = 75;
    int source_n = 10000, target_n = 500;
    double step = 0.01;
    std::string regen_in;

    auto* rollout = app.add_subcommand("rollout", "Write one trajectory as CSV");
    add_common(rollout, o, false, false);
    rollout->add_option("--steps", o.steps, "Number of steps (default 200)");

    auto* batch = app.add_subcommand("batch", "Generate a transition batch");
    add_common(batch, o, true, true);
    batch->add_option("--steps", o.steps, "Steps per setpoint (default 1000)");
    batch->add_flag("--parallel", parallel, "Generate setpoints concurrently");

    auto* evaluate = app.add_subcommand("evaluate", "Score a policy over episodes");
    add_common(evaluate, o, false, false);
    evaluate->add_option("--steps,--horizon", eval.horizon, "Scored steps per episode");
    evaluate->add_option("--episodes", eval.episodes, "Episodes per setpoint");
    evaluate->add_option("--init", init, "start | random")->check(CLI::IsMember({"start", "random"}));
    evaluate->add_option("--burn-in", eval.burn_in, "Unscored steps after a random start");

    auto* transfer = app.add_subcommand("transfer", "Source/target batches for transfer learning");
    add_common(transfer, o, true, true);
    transfer->add_option("--source-setpoint", source_p, "Setpoint of the source batch");
    transfer->add_option("--source-size", source_n, "Source batch steps");
    transfer->add_option("--target-setpoint", target_p, "Setpoint of the target batch");
    transfer->add_option("--target-size", target_n, "Target batch steps");

    auto* landscape = app.add_subcommand("landscape", "Dump the mis-calibration penalty grid");
    add_common(landscape, o, false, false);
    landscape->add_option("--step", step, "Grid step in effective shift");

    auto* regenerate = app.add_subcommand("regenerate", "Rebuild a batch from its metadata and compare");
    add_common(regenerate, o, true, false);
    regenerate->add_option("--in", regen_in, "Batch file to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*rollout) return run_rollout(o);
        if (*batch) return run_batch(o, parallel);
        if (*evaluate) {
            eval.init = init == "random" ? ibench::InitMode::Random : ibench::InitMode::Start;
            return run_evaluate(o, eval);
        }
        if (*transfer) return run_transfer(o, source_p, source_n, target_p, target_n);
        if (*landscape) return run_landscape(o, step);
        if (*regenerate) return run_regenerate(regen_in, o);
    } catch (const ibench::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ibench::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ibench::FormatError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}

/**
 * @file dataset.hpp
 * @brief Transition batches and their CSV / JSONL files.
 *
 * A batch file holds records only; its metadata goes to a sidecar
 * `<path>.meta.json`. CSV rows have 16 columns in the fixed order
 *
 *   p,v,g,h,c,f, dv,dg,dh, p_next,v_next,g_next,h_next,c_next,f_next, reward
 *
 * and JSONL has one record object per line. Doubles are written in the
 * shortest form that parses back to the same value.
 */

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "ibench/errors.hpp"
#include "ibench/state.hpp"

namespace ibench {

inline constexpr int kBatchSchemaVersion = 1;
inline constexpr const char* kBenchmarkVersion = "ibench-1";

/// (o_t, a_t, o_{t+1}, r) where r is the reward of the successor state.
struct TransitionRecord {
    Observation observation;
    Action action;
    Observation next_observation;
    double reward = 0.0;

    friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

struct TransferInfo {
    double source_setpoint = 0.0;
    int source_size = 0;
    double target_setpoint = 0.0;
    int target_size = 0;

    friend bool operator==(const TransferInfo&, const TransferInfo&) = default;
};

struct BatchMetadata {
    std::uint64_t seed = 0;
    std::vector<double> setpoints;
    int steps_per_setpoint = 0;
    std::string policy = "random";
    std::string benchmark_version = kBenchmarkVersion;
    std::string role = "batch"; ///< batch | transfer-source | transfer-target
    std::optional<TransferInfo> transfer;

    friend bool operator==(const BatchMetadata&, const BatchMetadata&) = default;
};

struct Batch {
    BatchMetadata metadata;
    std::vector<TransitionRecord> records;

    friend bool operator==(const Batch&, const Batch&) = default;
};

enum class BatchFormat { Csv, Jsonl };

inline BatchFormat parse_format(std::string_view s) {
    if (s == "csv") return BatchFormat::Csv;
    if (s == "jsonl") return BatchFormat::Jsonl;
    throw ValidationError("format must be 'csv' or 'jsonl'");
}

inline const char* format_name(BatchFormat f) { return f == BatchFormat::Csv ? "csv" : "jsonl"; }

inline std::filesystem::path metadata_path(const std::filesystem::path& p) {
    return p.string() + ".meta.json";
}

inline constexpr const char* kBatchCsvHeader =
    "p,v,g,h,c,f,dv,dg,dh,p_next,v_next,g_next,h_next,c_next,f_next,reward";

namespace detail {

inline void append_number(std::string& out, double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.append(buf, res.ptr);
}

inline std::vector<double> record_values(const TransitionRecord& r) {
    std::vector<double> v;
    v.reserve(16);
    for (double x : r.observation.to_array()) v.push_back(x);
    v.insert(v.end(), {r.action.delta_v, r.action.delta_g, r.action.delta_h});
    for (double x : r.next_observation.to_array()) v.push_back(x);
    v.push_back(r.reward);
    return v;
}

inline TransitionRecord record_from_values(const std::vector<double>& v) {
    TransitionRecord r;
    r.observation = Observation::from_array({v[0], v[1], v[2], v[3], v[4], v[5]});
    r.action = {v[6], v[7], v[8]};
    r.next_observation = Observation::from_array({v[9], v[10], v[11], v[12], v[13], v[14]});
    r.reward = v[15];
    return r;
}

inline nlohmann::json metadata_to_json(const BatchMetadata& m, BatchFormat format, std::size_t count) {
    nlohmann::json j{
        {"schema_version", kBatchSchemaVersion},
        {"format", format_name(format)},
        {"record_count", count},
        {"seed", m.seed},
        {"setpoints", m.setpoints},
        {"steps_per_setpoint", m.steps_per_setpoint},
        {"policy", m.policy},
        {"benchmark_version", m.benchmark_version},
        {"role", m.role},
    };
    if (m.transfer) {
        j["transfer"] = {{"source_setpoint", m.transfer->source_setpoint},
                         {"source_size", m.transfer->source_size},
                         {"target_setpoint", m.transfer->target_setpoint},
                         {"target_size", m.transfer->target_size}};
    }
    return j;
}

inline BatchMetadata metadata_from_json(const nlohmann::json& j) {
    BatchMetadata m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.setpoints = j.at("setpoints").get<std::vector<double>>();
    m.steps_per_setpoint = j.at("steps_per_setpoint").get<int>();
    m.policy = j.at("policy").get<std::string>();
    m.benchmark_version = j.at("benchmark_version").get<std::string>();
    m.role = j.at("role").get<std::string>();
    if (j.contains("transfer")) {
        const auto& t = j.at("transfer");
        m.transfer = TransferInfo{t.at("source_setpoint").get<double>(), t.at("source_size").get<int>(),
                                  t.at("target_setpoint").get<double>(), t.at("target_size").get<int>()};
    }
    return m;
}

inline std::vector<double> parse_csv_row(std::string_view line, std::size_t line_no) {
    std::vector<double> v;
    while (true) {
        const auto comma = line.find(',');
        const auto cell = line.substr(0, comma);
        double x = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
            throw FormatError("bad number on CSV line " + std::to_string(line_no));
        v.push_back(x);
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    if (v.size() != 16)
        throw FormatError("CSV line " + std::to_string(line_no) + " has " + std::to_string(v.size()) +
                          " columns, expected 16");
    return v;
}

} // namespace detail

inline void write_batch(std::ostream& os, const Batch& batch, BatchFormat format) {
    std::string line;
    if (format == BatchFormat::Csv) os << kBatchCsvHeader << '\n';
    for (const auto& r : batch.records) {
        line.clear();
        if (format == BatchFormat::Csv) {
            bool first = true;
            for (double x : detail::record_values(r)) {
                if (!first) line.push_back(',');
                first = false;
                detail::append_number(line, x);
            }
        } else {
            const auto v = detail::record_values(r);
            nlohmann::json j{{"o", std::vector<double>(v.begin(), v.begin() + 6)},
                             {"a", std::vector<double>(v.begin() + 6, v.begin() + 9)},
                             {"o_next", std::vector<double>(v.begin() + 9, v.begin() + 15)},
                             {"r", v[15]}};
            line = j.dump();
        }
        os << line << '\n';
    }
}

inline std::vector<TransitionRecord> read_records(std::istream& is, BatchFormat format) {
    std::vector<TransitionRecord> out;
    std::string line;
    std::size_t line_no = 0;
    if (format == BatchFormat::Csv) {
        if (!std::getline(is, line) || line != kBatchCsvHeader) throw FormatError("missing or wrong CSV header");
        ++line_no;
    }
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (format == BatchFormat::Csv) {
            out.push_back(detail::record_from_values(detail::parse_csv_row(line, line_no)));
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            auto o = j.at("o").get<std::vector<double>>();
            const auto a = j.at("a").get<std::vector<double>>();
            const auto n = j.at("o_next").get<std::vector<double>>();
            if (o.size() != 6 || a.size() != 3 || n.size() != 6)
                throw FormatError("JSONL line " + std::to_string(line_no) + " has wrong vector sizes");
            o.insert(o.end(), a.begin(), a.end());
            o.insert(o.end(), n.begin(), n.end());
            o.push_back(j.at("r").get<double>());
            out.push_back(detail::record_from_values(o));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("bad JSONL line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

/// Writes the records to `path` and the metadata sidecar next to it.
inline void export_batch(const Batch& batch, BatchFormat format, const std::filesystem::path& path) {
    std::ofstream data(path, std::ios::binary);
    if (!data) throw IoError("cannot open for writing: " + path.string());
    write_batch(data, batch, format);
    data.close();
    if (!data) throw IoError("write failed: " + path.string());

    std::ofstream meta(metadata_path(path), std::ios::binary);
    if (!meta) throw IoError("cannot open for writing: " + metadata_path(path).string());
    meta << detail::metadata_to_json(batch.metadata, format, batch.records.size()).dump(2) << '\n';
    meta.close();
    if (!meta) throw IoError("write failed: " + metadata_path(path).string());
}

inline Batch import_batch(const std::filesystem::path& path) {
    std::ifstream meta(metadata_path(path), std::ios::binary);
    if (!meta) throw IoError("cannot open metadata: " + metadata_path(path).string());
    nlohmann::json mj;
    try {
        mj = nlohmann::json::parse(meta);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad batch metadata: ") + e.what());
    }
    if (!mj.is_object() || mj.value("schema_version", -1) != kBatchSchemaVersion)
        throw FormatError("batch schema version mismatch");

    Batch batch;
    BatchFormat format;
    std::size_t count = 0;
    try {
        batch.metadata = detail::metadata_from_json(mj);
        format = parse_format(mj.at("format").get<std::string>());
        count = mj.at("record_count").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad batch metadata: ") + e.what());
    } catch (const ValidationError& e) {
        throw FormatError(std::string("bad batch metadata: ") + e.what());
    }

    std::ifstream data(path, std::ios::binary);
    if (!data) throw IoError("cannot open batch: " + path.string());
    batch.records = read_records(data, format);
    if (batch.records.size() != count)
        throw FormatError("record count " + std::to_string(batch.records.size()) +
                          " does not match metadata " + std::to_string(count));
    return batch;
}

} // namespace ibench

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "polya/analysis.hpp"
#include "polya/params.hpp"
#include "polya/simulate.hpp"
#include "polya/verify.hpp"

namespace polya {

namespace detail {

/// Shortest representation that round-trips through a double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::domain_error(path + ":" + std::to_string(line_no) + ": not a number: '" +
                                field + "'");
    return v;
}

/// Writes the whole file through a temporary sibling and renames it into
/// place, so a failed run never leaves a partial file at `path`.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace detail

/// Reads `ticker,market_cap` CSV. The snapshot's date label is the file stem.
inline MarketSnapshot read_snapshot(const std::filesystem::path& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty()) throw std::domain_error(path.string() + ": empty input");
    if (lines[0] != "ticker,market_cap")
        throw std::domain_error(path.string() + ":1: expected header 'ticker,market_cap', got '" +
                                lines[0] + "'");
    MarketSnapshot snap;
    snap.date_label = path.stem().string();
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) continue;
        const auto fields = detail::split_csv_line(lines[i]);
        if (fields.size() != 2)
            throw std::domain_error(path.string() + ":" + std::to_string(line_no) +
                                    ": expected 2 fields, got " + std::to_string(fields.size()));
        if (fields[0].empty())
            throw std::domain_error(path.string() + ":" + std::to_string(line_no) +
                                    ": empty ticker");
        if (!seen.insert(fields[0]).second)
            throw std::domain_error(path.string() + ":" + std::to_string(line_no) +
                                    ": duplicate ticker '" + fields[0] + "'");
        const double cap = detail::parse_double(fields[1], path.string(), line_no);
        if (!(cap > 0.0))
            throw std::domain_error(path.string() + ":" + std::to_string(line_no) +
                                    ": market_cap must be positive, got " + fields[1]);
        snap.entries.push_back({fields[0], cap});
    }
    if (snap.entries.empty()) throw std::domain_error(path.string() + ": no data rows");
    return snap;
}

inline void write_snapshot(const std::filesystem::path& path, const MarketSnapshot& snap) {
    std::string out = "ticker,market_cap\n";
    for (const auto& e : snap.entries)
        out += e.ticker + "," + detail::format_double(e.market_cap) + "\n";
    detail::write_text_atomic(path, out);
}

/// `rank,weight,log10_rank,log10_weight`; log fields are empty for ranks
/// whose weight is zero.
inline void write_curve(const std::filesystem::path& path, const CapitalCurve& curve) {
    std::string out = "rank,weight,log10_rank,log10_weight\n";
    std::size_t log_i = 0;
    for (std::size_t i = 0; i < curve.ranks.size(); ++i) {
        out += std::to_string(curve.ranks[i]) + "," + detail::format_double(curve.weights[i]);
        if (curve.weights[i] > 0.0 && log_i < curve.log10_points.size()) {
            out += "," + detail::format_double(curve.log10_points[log_i].first) + "," +
                   detail::format_double(curve.log10_points[log_i].second);
            ++log_i;
        } else {
            out += ",,";
        }
        out += "\n";
    }
    detail::write_text_atomic(path, out);
}

inline CapitalCurve read_curve(const std::filesystem::path& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    if (lines.empty()) throw std::domain_error(path.string() + ": empty input");
    if (lines[0] != "rank,weight,log10_rank,log10_weight")
        throw std::domain_error(path.string() + ":1: unexpected curve header '" + lines[0] + "'");
    CapitalCurve curve;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) continue;
        const auto fields = detail::split_csv_line(lines[i]);
        if (fields.size() != 4)
            throw std::domain_error(path.string() + ":" + std::to_string(line_no) +
                                    ": expected 4 fields, got " + std::to_string(fields.size()));
        curve.ranks.push_back(
            static_cast<std::int64_t>(detail::parse_double(fields[0], path.string(), line_no)));
        curve.weights.push_back(detail::parse_double(fields[1], path.string(), line_no));
        if (!fields[2].empty() || !fields[3].empty())
            curve.log10_points.emplace_back(detail::parse_double(fields[2], path.string(), line_no),
                                            detail::parse_double(fields[3], path.string(), line_no));
    }
    return curve;
}

/// `step,phase,stock,count,weight`, one row per (recorded step, stock).
/// Stocks are numbered 1..m. Weight is count over the step's level, 0 at the
/// empty state.
inline void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
    std::string out = "step,phase,stock,count,weight\n";
    for (const auto& rec : traj.records) {
        const bool growth = traj.scenario.mode == ScenarioMode::GrowthOnly ||
                            rec.step <= traj.scenario.threshold_level;
        const char* phase = growth ? "growth" : "equilibrium";
        const std::int64_t lvl = level(rec.state);
        for (std::size_t s = 0; s < rec.state.size(); ++s) {
            const double w =
                lvl > 0 ? static_cast<double>(rec.state[s]) / static_cast<double>(lvl) : 0.0;
            out += std::to_string(rec.step);
            out += ',';
            out += phase;
            out += ',';
            out += std::to_string(s + 1);
            out += ',';
            out += std::to_string(rec.state[s]);
            out += ',';
            out += detail::format_double(w);
            out += '\n';
        }
    }
    detail::write_text_atomic(path, out);
}

/// JSON-lines, one object per check:
///   {"check":...,"params":{"alpha":...,"stocks":...,"level":...},
///    "residual":...,"argmax_state":[[...],...]}
inline void write_report(const std::filesystem::path& path,
                         const std::vector<CheckReport>& reports) {
    std::string out;
    for (const auto& rep : reports) {
        nlohmann::ordered_json obj;
        obj["check"] = rep.check;
        obj["params"] = {{"alpha", rep.alpha}, {"stocks", rep.stocks}, {"level", rep.level}};
        obj["residual"] = rep.residual;
        obj["argmax_state"] = rep.argmax_state;
        out += obj.dump();
        out += '\n';
    }
    detail::write_text_atomic(path, out);
}

inline std::vector<CheckReport> read_report(const std::filesystem::path& path) {
    const std::vector<std::string> lines = detail::read_lines(path);
    std::vector<CheckReport> reports;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::domain_error(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
        CheckReport rep;
        rep.check = obj.at("check").get<std::string>();
        rep.alpha = obj.at("params").at("alpha").get<double>();
        rep.stocks = obj.at("params").at("stocks").get<int>();
        rep.level = obj.at("params").at("level").get<std::int64_t>();
        rep.residual = obj.at("residual").get<double>();
        rep.argmax_state = obj.at("argmax_state").get<std::vector<Composition>>();
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace polya

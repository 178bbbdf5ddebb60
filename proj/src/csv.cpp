#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "cml/errors.hpp"
#include "cml/io.hpp"

namespace cml {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    return os;
}

void check_written(std::ostream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw IoError("failed writing " + path.string());
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string_view boolean(bool b) { return b ? "true" : "false"; }

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::optional<double> parse_opt(std::string_view s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

bool parse_bool(std::string_view s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw IoError("expected true/false, got '" + std::string(s) + "'");
}

Classification parse_classification(std::string_view s) {
    if (s == "boltzmann_gibbs") return Classification::boltzmann_gibbs;
    if (s == "pareto") return Classification::pareto;
    if (s == "both") return Classification::both;
    if (s == "neither") return Classification::neither;
    throw IoError("unknown classification '" + std::string(s) + "'");
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

void write_phase_map_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
    os << kPhaseMapHeader << '\n';
    for (const auto& c : cells) {
        os << format_double(c.a) << ',' << format_double(c.r) << ',' << boolean(c.divergent) << ','
           << opt(c.h_snapshot) << ',' << opt(c.h_mean) << ',' << opt(c.sigma_mean) << ',' << opt(c.gini_snapshot)
           << ',' << opt(c.gini_mean) << ',';
        if (c.bg) {
            os << format_double(c.bg->exponent) << ',' << format_double(c.bg->beta) << ',' << boolean(c.bg->accepted);
        } else {
            os << ",,false";
        }
        os << ',';
        if (c.pareto) {
            os << format_double(c.pareto->exponent) << ',' << format_double(c.pareto->beta) << ','
               << boolean(c.pareto->accepted);
        } else {
            os << ",,false";
        }
        os << ',' << to_string(c.classification) << ',' << opt(c.temperature) << '\n';
    }
}

void write_phase_map_csv(const std::filesystem::path& path, const std::vector<CellSummary>& cells) {
    auto os = open_out(path);
    write_phase_map_csv(os, cells);
    check_written(os, path);
}

std::vector<CellSummary> read_phase_map_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty phase-map file");
    if (line != kPhaseMapHeader) throw IoError("unexpected phase-map header: " + line);
    const std::size_t columns = split(kPhaseMapHeader).size();
    std::vector<CellSummary> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != columns) {
            throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(columns) + " fields");
        }
        CellSummary c;
        c.a = parse_double(f[0]);
        c.r = parse_double(f[1]);
        c.divergent = parse_bool(f[2]);
        c.h_snapshot = parse_opt(f[3]);
        c.h_mean = parse_opt(f[4]);
        c.sigma_mean = parse_opt(f[5]);
        c.gini_snapshot = parse_opt(f[6]);
        c.gini_mean = parse_opt(f[7]);
        if (!f[8].empty()) {
            c.bg = FitResult{Family::boltzmann_gibbs, parse_double(f[8]), 0.0, parse_double(f[9]), parse_bool(f[10]), 0};
        }
        if (!f[11].empty()) {
            c.pareto = FitResult{Family::pareto, parse_double(f[11]), 0.0, parse_double(f[12]), parse_bool(f[13]), 0};
        }
        c.classification = parse_classification(f[14]);
        c.temperature = parse_opt(f[15]);
        out.push_back(c);
    }
    return out;
}

std::vector<CellSummary> read_phase_map_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    return read_phase_map_csv(is);
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
    os << kHistogramHeader << '\n';
    for (std::size_t k = 0; k < h.bins(); ++k) {
        os << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]) << ',' << format_double(h.center(k))
           << ',' << h.counts[k] << ',' << format_double(h.density[k]) << '\n';
    }
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
    auto os = open_out(path);
    write_histogram_csv(os, h);
    check_written(os, path);
}

void write_fits_csv(const std::filesystem::path& path, const std::optional<FitResult>& bg,
                    const std::optional<FitResult>& pareto) {
    auto os = open_out(path);
    os << kFitsHeader << '\n';
    for (const auto* f : {&bg, &pareto}) {
        if (!*f) continue;
        const FitResult& r = **f;
        os << to_string(r.family) << ',' << format_double(r.exponent) << ',' << format_double(r.intercept) << ','
           << format_double(r.beta) << ',' << boolean(r.accepted) << ',' << r.points_used << '\n';
    }
    check_written(os, path);
}

void write_series_csv(const std::filesystem::path& path, const CellRun& run) {
    auto os = open_out(path);
    os << kSeriesHeader << '\n';
    for (std::size_t k = 0; k < run.times.size(); ++k) {
        const double g = run.gini.values[k];
        os << run.times[k] << ',' << format_double(run.mean_field.values[k]) << ','
           << format_double(run.sigma.values[k]) << ',' << (std::isnan(g) ? std::string() : format_double(g)) << '\n';
    }
    check_written(os, path);
}

}  // namespace cml

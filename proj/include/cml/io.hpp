#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cml/distribution_fit.hpp"
#include "cml/sweep.hpp"

namespace cml {

// CSV artifacts. UTF-8, LF line endings, '.' decimal separator, numbers in
// shortest round-trip form, unset values as empty fields.

inline constexpr std::string_view kPhaseMapHeader =
    "a,r,divergent,h_snapshot,h_mean,sigma_mean,gini_snapshot,gini_mean,mu,beta_bg,bg_accepted,"
    "alpha,beta_pareto,pareto_accepted,classification,temperature";
inline constexpr std::string_view kHistogramHeader = "bin_lo,bin_hi,bin_center,count,density";
inline constexpr std::string_view kFitsHeader = "family,exponent,intercept,beta,accepted,points_used";
inline constexpr std::string_view kSeriesHeader = "t,mean_field,sigma,gini";

/// Shortest representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

void write_phase_map_csv(std::ostream& os, const std::vector<CellSummary>& cells);
void write_phase_map_csv(const std::filesystem::path& path, const std::vector<CellSummary>& cells);

/// Parses a phase-map CSV. Fit intercepts and point counts are not part of
/// the schema and come back as zero.
std::vector<CellSummary> read_phase_map_csv(std::istream& is);
std::vector<CellSummary> read_phase_map_csv(const std::filesystem::path& path);

void write_histogram_csv(std::ostream& os, const Histogram& h);
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);

void write_fits_csv(const std::filesystem::path& path, const std::optional<FitResult>& bg,
                    const std::optional<FitResult>& pareto);
void write_series_csv(const std::filesystem::path& path, const CellRun& run);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct OutputFile {
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string command;
    SweepConfig config;
    std::string seed_source = "flag";
    std::string code_version;
    std::string rng_identity;
    std::string started;
    std::string finished;
    unsigned threads = 1;
    std::vector<OutputFile> output_files;
};

/// Digests each path; the manifest records paths relative to its own directory.
std::vector<OutputFile> describe_outputs(const std::vector<std::filesystem::path>& files,
                                         const std::filesystem::path& base);

std::string manifest_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

std::string config_json(const SweepConfig& cfg);

/// UTC, ISO-8601 with millisecond precision.
std::string iso8601_utc_ms(std::int64_t unix_ms);
std::int64_t now_unix_ms();

std::string_view code_version() noexcept;

}  // namespace cml

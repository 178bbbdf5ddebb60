#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>

#include <json.hpp>

#include "cml/errors.hpp"
#include "cml/io.hpp"
#include "cml/rng.hpp"

#ifndef CML_ECONO_VERSION
#define CML_ECONO_VERSION "0.0.0"
#endif

namespace cml {

namespace {

using json = nlohmann::ordered_json;

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

json opt_range_json(const std::optional<Range>& r) { return r ? range_json(*r) : json(nullptr); }

}  // namespace

std::string_view code_version() noexcept { return CML_ECONO_VERSION; }

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw IoError("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

std::vector<OutputFile> describe_outputs(const std::vector<std::filesystem::path>& files,
                                         const std::filesystem::path& base) {
    std::vector<OutputFile> out;
    for (const auto& f : files) {
        out.push_back({std::filesystem::relative(f, base).generic_string(), sha256_file(f), std::filesystem::file_size(f)});
    }
    return out;
}

std::string config_json(const SweepConfig& c) {
    json j;
    j["a_range"] = range_json(c.a_range);
    j["r_range"] = range_json(c.r_range);
    j["grid_step"] = c.grid_step;
    j["n"] = c.n;
    j["transient"] = c.transient;
    j["window"] = c.window;
    j["realizations"] = c.realizations;
    j["master_seed"] = c.master_seed;
    j["init_range"] = json::array({c.init_lo, c.init_hi});
    j["init_const"] = c.init_const ? json(*c.init_const) : json(nullptr);
    j["sample_mode"] = std::string(to_string(c.sample_mode));
    j["bg_bins"] = c.bg_bins;
    j["pareto_scheme"] = std::string(to_string(c.pareto_scheme));
    j["pareto_bins"] = c.pareto_bins;
    j["beta_threshold"] = c.beta_threshold;
    j["min_points"] = c.min_points;
    j["min_count"] = c.min_count;
    j["min_count_fraction"] = c.min_count_fraction;
    j["bg_fit_range"] = opt_range_json(c.bg_fit_range);
    j["pareto_fit_range"] = opt_range_json(c.pareto_fit_range);
    return j.dump(2);
}

std::string manifest_json(const RunManifest& m) {
    json j;
    j["command"] = m.command;
    j["code_version"] = m.code_version.empty() ? std::string(code_version()) : m.code_version;
    j["rng_identity"] = m.rng_identity.empty() ? std::string(kRngIdentity) : m.rng_identity;
    j["seed_source"] = m.seed_source;
    j["threads"] = m.threads;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["config"] = json::parse(config_json(m.config));
    json files = json::array();
    for (const auto& f : m.output_files) {
        files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    j["output_files"] = files;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << manifest_json(m);
    os.flush();
    if (!os) throw IoError("failed writing " + path.string());
}

std::int64_t now_unix_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string iso8601_utc_ms(std::int64_t unix_ms) {
    const std::time_t secs = static_cast<std::time_t>(unix_ms / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(unix_ms % 1000));
    return out;
}

}  // namespace cml

// Copyright 2026 The hqfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hqf/hqf.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "hqf/experiment.hpp"

struct hqf_config {
    hqf::ExperimentConfig value;
};

struct hqf_record {
    hqf::MeasurementRecord record;
    std::optional<hqf::TruthTrajectory> truth;
};

struct hqf_metrics {
    hqf::Metrics value;
};

namespace {

thread_local std::string last_error;

hqf_status to_status(hqf::ErrorKind kind) {
    switch (kind) {
        case hqf::ErrorKind::invalid_argument: return HQF_ERR_INVALID_ARGUMENT;
        case hqf::ErrorKind::dimension_mismatch: return HQF_ERR_DIMENSION;
        case hqf::ErrorKind::numerical: return HQF_ERR_NUMERICAL;
        case hqf::ErrorKind::io: return HQF_ERR_IO;
        case hqf::ErrorKind::parse: return HQF_ERR_PARSE;
    }
    return HQF_ERR_INTERNAL;
}

hqf_status fail(hqf_status s, std::string message) {
    last_error = std::move(message);
    return s;
}

/// Run `body`, translating every exception into a status code.
template <class F>
hqf_status guarded(F&& body) {
    last_error.clear();
    try {
        body();
        return HQF_OK;
    } catch (const hqf::Error& e) {
        return fail(to_status(e.kind()), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(HQF_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(HQF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(HQF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(HQF_ERR_INTERNAL, "unknown error");
    }
}

#define HQF_REQUIRE(ptr)                                                                   \
    do {                                                                                   \
        if (!(ptr)) return fail(HQF_ERR_INVALID_ARGUMENT, #ptr " must not be NULL");       \
    } while (0)

hqf::TruthTrajectory simulate_one(const hqf::ExperimentConfig& c, std::uint64_t trajectory) {
    return hqf::simulate_truth(c.qubit(), c.ou(), c.qubit_initial(), c.truth_settings(), c.seed, trajectory);
}

}  // namespace

extern "C" {

const char* hqf_version(void) { return hqf::kVersion; }

const char* hqf_last_error(void) { return last_error.c_str(); }

const char* hqf_status_name(hqf_status status) {
    switch (status) {
        case HQF_OK: return "ok";
        case HQF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case HQF_ERR_DIMENSION: return "dimension mismatch";
        case HQF_ERR_NUMERICAL: return "numerical failure";
        case HQF_ERR_IO: return "i/o error";
        case HQF_ERR_PARSE: return "parse error";
        case HQF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

hqf_status hqf_config_create(hqf_config** out) {
    HQF_REQUIRE(out);
    return guarded([&] { *out = new hqf_config{}; });
}

hqf_status hqf_config_load(const char* path, hqf_config** out) {
    HQF_REQUIRE(path);
    HQF_REQUIRE(out);
    return guarded([&] { *out = new hqf_config{hqf::ExperimentConfig::load(path)}; });
}

hqf_status hqf_config_set(hqf_config* config, const char* key, const char* value) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(key);
    HQF_REQUIRE(value);
    return guarded([&] { config->value.set(key, value); });
}

hqf_status hqf_config_get(const hqf_config* config, const char* key, char* buf, size_t buflen, size_t* needed) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(key);
    std::string text;
    const hqf_status s = guarded([&] { text = config->value.get(key); });
    if (s != HQF_OK) return s;
    if (needed) *needed = text.size() + 1;
    if (!buf) return needed ? HQF_OK : fail(HQF_ERR_INVALID_ARGUMENT, "buf must not be NULL");
    if (buflen < text.size() + 1) return fail(HQF_ERR_INVALID_ARGUMENT, "buffer too small for config value");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return HQF_OK;
}

hqf_status hqf_config_validate(const hqf_config* config) {
    HQF_REQUIRE(config);
    return guarded([&] { config->value.validate(); });
}

hqf_status hqf_config_save(const hqf_config* config, const char* path) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(path);
    return guarded([&] { config->value.save(path); });
}

void hqf_config_destroy(hqf_config* config) { delete config; }

hqf_status hqf_simulate(const hqf_config* config, uint64_t trajectory, hqf_record** out) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(out);
    return guarded([&] {
        config->value.validate();
        hqf::TruthTrajectory truth = simulate_one(config->value, trajectory);
        auto* r = new hqf_record{truth.record, std::move(truth)};
        *out = r;
    });
}

hqf_status hqf_simulate_ensemble(const hqf_config* config, const char* dir) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(dir);
    return guarded([&] {
        const auto& c = config->value;
        c.validate();
        std::filesystem::create_directories(dir);
        for (std::size_t i = 0; i < c.trajectories; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "truth_%04zu.csv", i);
            hqf::write_truth_csv((std::filesystem::path(dir) / name).string(), simulate_one(c, i));
        }
        hqf::write_manifest((std::filesystem::path(dir) / "manifest.txt").string(), c);
    });
}

hqf_status hqf_record_load(const char* path, hqf_record** out) {
    HQF_REQUIRE(path);
    HQF_REQUIRE(out);
    return guarded([&] { *out = new hqf_record{hqf::read_record_csv(std::string(path)), std::nullopt}; });
}

hqf_status hqf_record_save(const hqf_record* record, const char* path) {
    HQF_REQUIRE(record);
    HQF_REQUIRE(path);
    if (!record->truth) return fail(HQF_ERR_INVALID_ARGUMENT, "record carries no truth trajectory to save");
    return guarded([&] { hqf::write_truth_csv(std::string(path), *record->truth); });
}

size_t hqf_record_length(const hqf_record* record) { return record ? record->record.steps() : 0; }

double hqf_record_dt(const hqf_record* record) { return record ? record->record.dt : 0.0; }

hqf_status hqf_record_increments(const hqf_record* record, double* out, size_t n) {
    HQF_REQUIRE(record);
    HQF_REQUIRE(out);
    if (n < record->record.steps()) return fail(HQF_ERR_INVALID_ARGUMENT, "output buffer shorter than the record");
    std::memcpy(out, record->record.increments.data(), record->record.steps() * sizeof(double));
    return HQF_OK;
}

void hqf_record_destroy(hqf_record* record) { delete record; }

hqf_status hqf_filter_sme(const hqf_config* config, const hqf_record* record, const char* csv_path) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(record);
    HQF_REQUIRE(csv_path);
    return guarded([&] {
        config->value.validate();
        const auto run = hqf::run_sme(record->record, config->value.sme_config(config->value.n_prime));
        hqf::write_sme_csv(std::string(csv_path), run.samples);
    });
}

hqf_status hqf_filter_qekf(const hqf_config* config, const hqf_record* record, const char* csv_path) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(record);
    HQF_REQUIRE(csv_path);
    return guarded([&] {
        config->value.validate();
        const auto samples = hqf::run_qekf(record->record, config->value.qekf_config(config->value.n_prime));
        hqf::write_qekf_csv(std::string(csv_path), samples);
    });
}

hqf_status hqf_experiment_run(const hqf_config* config, const char* out_dir, int with_bench, hqf_metrics** out) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(out_dir);
    return guarded([&] {
        hqf::Metrics m = hqf::run_experiment(config->value, out_dir, with_bench != 0);
        if (out) *out = new hqf_metrics{std::move(m)};
    });
}

hqf_status hqf_metrics_get(const hqf_metrics* metrics, const char* name, double* out) {
    HQF_REQUIRE(metrics);
    HQF_REQUIRE(name);
    HQF_REQUIRE(out);
    const auto& m = metrics->value;
    const std::string key(name);
    if (key == "trajectories") *out = double(m.trajectories);
    else if (key == "rmse_q_sme") *out = m.rmse_q_sme;
    else if (key == "rmse_q_qekf") *out = m.rmse_q_qekf;
    else if (key == "sme_seconds_mean") *out = m.sme_seconds_mean;
    else if (key == "qekf_seconds_mean") *out = m.qekf_seconds_mean;
    else return fail(HQF_ERR_INVALID_ARGUMENT, "unknown metric '" + key + "'");
    return HQF_OK;
}

void hqf_metrics_destroy(hqf_metrics* metrics) { delete metrics; }

hqf_status hqf_bench(const hqf_config* config, const char* csv_path) {
    HQF_REQUIRE(config);
    HQF_REQUIRE(csv_path);
    return guarded([&] {
        hqf::write_timing_csv(csv_path, hqf::bench_dimension(config->value, config->value.bench_n_primes));
    });
}

hqf_status hqf_plot(const char* dir, size_t* written) {
    HQF_REQUIRE(dir);
    return guarded([&] {
        const auto paths = hqf::emit_plots(dir);
        if (written) *written = paths.size();
    });
}

}  // extern "C"

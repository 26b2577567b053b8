// Copyright 2026 The renyi-chain Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/chainrule.hpp"
#include "renyi/entropy.hpp"
#include "renyi/states.hpp"

namespace renyi {

// ordered_json keeps the file's key order, which fixes the factor order of
// the "dims" object.
using Json = nlohmann::ordered_json;

// Matrix exchange format:
// {"rows": n, "cols": m, "re": [...], "im": [...], "dims": {"A": dA, ...}}
// with row-major flattening.
inline Json matrix_to_json(const Matrix& M, const TensorFactorization& f) {
    Json j;
    j["rows"] = M.rows();
    j["cols"] = M.cols();
    std::vector<double> re, im;
    re.reserve(M.size());
    im.reserve(M.size());
    for (int r = 0; r < M.rows(); ++r)
        for (int c = 0; c < M.cols(); ++c) {
            re.push_back(M(r, c).real());
            im.push_back(M(r, c).imag());
        }
    j["re"] = re;
    j["im"] = im;
    Json dims = Json::object();
    for (std::size_t i = 0; i < f.size(); ++i) dims[f.labels[i]] = f.dims[i];
    j["dims"] = dims;
    return j;
}

inline std::pair<Matrix, TensorFactorization> matrix_from_json(const Json& j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("re") || !j.contains("im"))
        throw Error("matrix json: missing rows/cols/re/im");
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    auto re = j.at("re").get<std::vector<double>>();
    auto im = j.at("im").get<std::vector<double>>();
    if (static_cast<int>(re.size()) != rows * cols || re.size() != im.size())
        throw Error("matrix json: entry count does not match rows*cols");
    Matrix M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double a = re[r * cols + c], b = im[r * cols + c];
            if (!std::isfinite(a) || !std::isfinite(b))
                throw Error("matrix json: non-finite entry");
            M(r, c) = Cplx(a, b);
        }

    std::vector<std::string> labels;
    std::vector<int> dims;
    if (j.contains("dims")) {
        for (auto it = j.at("dims").begin(); it != j.at("dims").end(); ++it) {
            labels.push_back(it.key());
            dims.push_back(it.value().get<int>());
        }
    } else {
        labels = {"A"};
        dims = {rows};
    }
    TensorFactorization f(labels, dims);
    if (f.total_dim() != rows)
        throw DimensionMismatch("matrix json: dims product does not match rows");
    return {std::move(M), std::move(f)};
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

// FNV-1a 64-bit content digest for run manifests.
inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_digest(ss.str());
}

// Everything needed to bit-reproduce a report. The wall-clock timestamp is
// kept out of report files so reruns are byte-identical; callers may print it
// separately.
struct RunManifest {
    std::string command;
    Json parameters = Json::object();
    std::uint64_t master_seed = 0;
    std::string tool_version;
    Json input_digests = Json::object();
};

inline Json manifest_to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    j["master_seed"] = m.master_seed;
    j["tool_version"] = m.tool_version;
    j["input_digests"] = m.input_digests;
    return j;
}

inline Json json_value_bits(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline Json entropy_result_to_json(const EntropyResult& r, const std::string& quantity,
                                   const std::string& systems, double alpha,
                                   std::uint64_t seed,
                                   const TensorFactorization* sigma_fact = nullptr) {
    Json j;
    j["quantity"] = quantity;
    j["systems"] = systems;
    j["alpha"] = alpha;
    j["value_bits"] = json_value_bits(r.value);
    j["method"] = r.method;
    Json opt;
    opt["iterations"] = r.iterations;
    opt["residual"] = r.residual;
    if (r.optimizer_state && sigma_fact)
        opt["sigma_star"] = matrix_to_json(*r.optimizer_state, *sigma_fact);
    else
        opt["sigma_star"] = nullptr;
    j["optimizer"] = opt;
    j["seed"] = seed;
    return j;
}

inline Json trial_report_to_json(const TrialReport& r) {
    Json j;
    j["triple"] = r.triple_id;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["gamma"] = r.gamma;
    j["direction"] = to_string(r.direction);
    j["provenance"] = to_string(r.provenance);
    j["seed"] = r.seed;
    j["state"] = r.state_name;
    j["dims"] = r.dims;
    j["rank"] = r.rank;
    j["pin"] = r.pin;
    j["lhs_bits"] = json_value_bits(r.lhs_bits);
    j["rhs_bits"] = json_value_bits(r.rhs_bits);
    j["h_beta_bits"] = json_value_bits(r.h_beta_bits);
    j["h_gamma_bits"] = json_value_bits(r.h_gamma_bits);
    j["margin_bits"] = json_value_bits(r.margin_bits);
    j["theorem1_product"] = r.theorem1_product;
    j["product_direction"] = to_string(r.product_direction);
    j["product_vs_one_disagrees"] = r.product_disagrees;
    j["product_positive"] = r.theorem1_product > 0.0;
    j["restart_gap"] = r.restart_gap;
    j["converged"] = r.converged;
    return j;
}

inline std::string trial_report_csv_header() {
    return "triple,seed,lhs_bits,rhs_bits,margin_bits,direction,provenance,theorem1_product";
}

inline std::string trial_report_csv_row(const TrialReport& r) {
    std::ostringstream ss;
    ss.precision(17);
    ss << '"' << r.triple_id << "\"," << r.seed << ',' << r.lhs_bits << ',' << r.rhs_bits
       << ',' << r.margin_bits << ',' << to_string(r.direction) << ','
       << to_string(r.provenance) << ',' << r.theorem1_product;
    return ss.str();
}

inline std::string sweep_to_jsonl(const SweepResult& res, const RunManifest& manifest) {
    std::ostringstream out;
    Json head;
    head["manifest"] = manifest_to_json(manifest);
    out << head.dump() << '\n';
    for (const auto& rep : res.reports) out << trial_report_to_json(rep).dump() << '\n';
    Json summary;
    summary["type"] = "summary";
    summary["violations"] = res.violations;
    summary["worst_margin_bits"] = json_value_bits(res.worst_margin);
    summary["max_restart_gap"] = res.max_restart_gap;
    Json triples = Json::array();
    for (const auto& s : res.summaries) {
        Json t;
        t["triple"] = s.triple_id;
        t["trials"] = s.trials;
        t["min_margin_bits"] = json_value_bits(s.min_margin);
        t["mean_margin_bits"] = json_value_bits(s.mean_margin);
        t["violations"] = s.violations;
        t["theorem1_product_vs_one_disagrees"] = s.product_disagrees;
        triples.push_back(t);
    }
    summary["triples"] = triples;
    out << summary.dump() << '\n';
    return out.str();
}

inline std::string sweep_to_csv(const SweepResult& res) {
    std::ostringstream out;
    out << trial_report_csv_header() << '\n';
    for (const auto& rep : res.reports) out << trial_report_csv_row(rep) << '\n';
    return out.str();
}

}  // namespace renyi

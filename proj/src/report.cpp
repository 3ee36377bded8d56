#include "sparsenc/report.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "sparsenc/types.hpp"

namespace sparsenc {

namespace {

using json = nlohmann::ordered_json;

json delta_array(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) {
        if (std::isnan(x))
            arr.push_back(nullptr);
        else
            arr.push_back(x);
    }
    return arr;
}

std::vector<double> delta_from(const json& arr) {
    std::vector<double> v;
    for (const auto& e : arr)
        v.push_back(e.is_null() ? std::numeric_limits<double>::quiet_NaN() : e.get<double>());
    return v;
}

json to_json_obj(const LossReport& r, bool include_timings) {
    json j;
    j["algorithm"] = r.algorithm;
    j["strategy"] = r.strategy;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["k_requested"] = r.k_requested;
    j["k_effective"] = r.k_effective;
    j["sparsity_mode"] = r.sparsity_mode;
    if (r.sparsity_mode == "fixed") j["r"] = r.r;
    if (!r.schedule.empty()) j["schedule"] = r.schedule;
    if (!std::isnan(r.eps)) j["eps"] = r.eps;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["info_loss"] = r.info_loss;
    j["pca_loss"] = r.pca_loss;
    if (std::isinf(r.info_loss_normalized))
        j["info_loss_normalized"] = "infinity";
    else
        j["info_loss_normalized"] = r.info_loss_normalized;
    j["sym_explained_variance"] = r.sym_explained_variance;
    if (r.bound_factor.has_value())
        j["bound_factor"] = *r.bound_factor;
    else
        j["bound_factor"] = "not applicable";
    j["per_column_sparsity"] = r.per_column_sparsity;
    j["combined_sparsity"] = r.combined_sparsity;
    j["avg_column_sparsity"] = r.avg_column_sparsity;
    if (!r.selected_columns.empty()) j["selected_columns"] = r.selected_columns;
    j["reduced_cardinality"] = r.reduced_cardinality;
    j["rank_clamped"] = r.rank_clamped;
    j["early_stop"] = r.early_stop;
    if (!r.per_step_loss.empty()) j["per_step_loss"] = r.per_step_loss;
    if (!r.per_step_delta.empty()) j["per_step_delta"] = delta_array(r.per_step_delta);
    if (include_timings) {
        j["timings"] = {{"select_seconds", r.select_seconds},
                        {"encode_seconds", r.encode_seconds},
                        {"total_seconds", r.total_seconds}};
    }
    return j;
}

LossReport from_json_obj(const json& j) {
    LossReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    r.rows = j.at("rows").get<int>();
    r.cols = j.at("cols").get<int>();
    r.k_requested = j.at("k_requested").get<int>();
    r.k_effective = j.at("k_effective").get<int>();
    r.sparsity_mode = j.at("sparsity_mode").get<std::string>();
    if (j.contains("r")) r.r = j["r"].get<int>();
    if (j.contains("schedule")) r.schedule = j["schedule"].get<std::vector<int>>();
    if (j.contains("eps")) r.eps = j["eps"].get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trials = j.at("trials").get<int>();
    r.info_loss = j.at("info_loss").get<double>();
    r.pca_loss = j.at("pca_loss").get<double>();
    const auto& niln = j.at("info_loss_normalized");
    r.info_loss_normalized =
        niln.is_string() ? std::numeric_limits<double>::infinity() : niln.get<double>();
    r.sym_explained_variance = j.at("sym_explained_variance").get<double>();
    const auto& bf = j.at("bound_factor");
    if (bf.is_number()) r.bound_factor = bf.get<double>();
    r.per_column_sparsity = j.at("per_column_sparsity").get<std::vector<int>>();
    r.combined_sparsity = j.at("combined_sparsity").get<int>();
    r.avg_column_sparsity = j.at("avg_column_sparsity").get<double>();
    if (j.contains("selected_columns"))
        r.selected_columns = j["selected_columns"].get<std::vector<int>>();
    r.reduced_cardinality = j.at("reduced_cardinality").get<int>();
    r.rank_clamped = j.at("rank_clamped").get<bool>();
    r.early_stop = j.at("early_stop").get<bool>();
    if (j.contains("per_step_loss"))
        r.per_step_loss = j["per_step_loss"].get<std::vector<double>>();
    if (j.contains("per_step_delta")) r.per_step_delta = delta_from(j["per_step_delta"]);
    if (j.contains("timings")) {
        r.select_seconds = j["timings"].at("select_seconds").get<double>();
        r.encode_seconds = j["timings"].at("encode_seconds").get<double>();
        r.total_seconds = j["timings"].at("total_seconds").get<double>();
    }
    return r;
}

}  // namespace

std::string report_to_json(const LossReport& rep, bool include_timings) {
    return to_json_obj(rep, include_timings).dump(2);
}

std::string reports_to_json(const std::vector<LossReport>& reps, bool include_timings) {
    json doc;
    json runs = json::array();
    for (const auto& r : reps) runs.push_back(to_json_obj(r, include_timings));
    doc["runs"] = std::move(runs);
    return doc.dump(2);
}

LossReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("report_from_json: ") + e.what());
    }
    return from_json_obj(j);
}

std::vector<LossReport> reports_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("reports_from_json: ") + e.what());
    }
    std::vector<LossReport> out;
    for (const auto& e : j.at("runs")) out.push_back(from_json_obj(e));
    return out;
}

}  // namespace sparsenc

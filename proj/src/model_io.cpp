#include "greendens/model_io.hpp"

#include "greendens/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace greendens {

namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "greendens-model";
constexpr const char* kClassifierFormat = "greendens-classifier";
constexpr int kVersion = 1;

json rows_to_json(const std::vector<double>& data, int dim) {
    json rows = json::array();
    const std::size_t d = static_cast<std::size_t>(dim);
    for (std::size_t i = 0; i < data.size(); i += d) {
        json row = json::array();
        for (std::size_t k = 0; k < d; ++k) row.push_back(data[i + k]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> rows_from_json(const json& rows, int dim, const char* what) {
    if (!rows.is_array())
        throw FormatError(std::string("model document: ") + what + " must be an array");
    std::vector<double> out;
    out.reserve(rows.size() * static_cast<std::size_t>(dim));
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
            throw FormatError(std::string("model document: ") + what +
                              " row width does not match the dimension");
        for (const json& v : row) {
            if (!v.is_number())
                throw FormatError(std::string("model document: ") + what +
                                  " holds a non-numeric entry");
            out.push_back(v.get<double>());
        }
    }
    return out;
}

json model_to_json(const DensityModel& m) {
    json j;
    j["format"] = kModelFormat;
    j["version"] = kVersion;
    j["dim"] = m.dim();
    j["points"] = rows_to_json(m.sample().data(), m.dim());
    j["phi"] = rows_to_json(m.field().phi, m.dim());
    const FitConfig& c = m.fit_config();
    j["fit_config"] = {{"n_large_fit", c.n_large_fit}, {"step_cap", c.step_cap},
                       {"tolerance", c.tolerance},     {"max_iterations", c.max_iterations},
                       {"restarts", c.restarts},       {"seed", c.seed}};
    j["n_large_eval"] = m.n_large_eval();
    const FitReport& r = m.report();
    j["report"] = {{"iterations_used", r.iterations_used},
                   {"energy_initial", r.energy_initial},
                   {"energy_final", r.energy_final},
                   {"mean_misalignment", r.mean_misalignment},
                   {"restart_energies", r.restart_energies},
                   {"converged", r.converged}};
    return j;
}

DensityModel model_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != kModelFormat)
        throw FormatError("model document: unrecognized format tag");
    if (j.value("version", -1) != kVersion)
        throw FormatError("model document: unsupported version");
    int dim = j.at("dim").get<int>();
    SampleSet sample(dim, rows_from_json(j.at("points"), dim, "points"));
    DipoleField field(dim, rows_from_json(j.at("phi"), dim, "phi"));
    const json& jc = j.at("fit_config");
    FitConfig cfg;
    cfg.n_large_fit = jc.at("n_large_fit").get<int>();
    cfg.step_cap = jc.at("step_cap").get<double>();
    cfg.tolerance = jc.at("tolerance").get<double>();
    cfg.max_iterations = jc.at("max_iterations").get<int>();
    cfg.restarts = jc.at("restarts").get<int>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();
    const json& jr = j.at("report");
    FitReport rep;
    rep.iterations_used = jr.at("iterations_used").get<int>();
    rep.energy_initial = jr.at("energy_initial").get<double>();
    rep.energy_final = jr.at("energy_final").get<double>();
    rep.mean_misalignment = jr.at("mean_misalignment").get<double>();
    rep.restart_energies = jr.at("restart_energies").get<std::vector<double>>();
    rep.converged = jr.at("converged").get<bool>();
    int n_large_eval = j.at("n_large_eval").get<int>();
    return DensityModel(std::move(sample), std::move(field), cfg, n_large_eval,
                        std::move(rep));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

json parse_checked(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw FormatError("document is not valid JSON");
    return j;
}

} // namespace

std::string model_to_string(const DensityModel& m) { return model_to_json(m).dump(1) + "\n"; }

DensityModel model_from_string(const std::string& text) {
    try {
        return model_from_json(parse_checked(text));
    } catch (const json::exception& e) {
        throw FormatError(std::string("model document: ") + e.what());
    }
}

void save_model(const DensityModel& m, const std::string& path) {
    write_file(path, model_to_string(m));
}

DensityModel load_model(const std::string& path) {
    return model_from_string(read_file(path));
}

std::string classifier_to_string(const LikelihoodModel& m) {
    json j;
    j["format"] = kClassifierFormat;
    j["version"] = kVersion;
    j["epsilon"] = m.epsilon();
    j["signal"] = model_to_json(m.signal());
    j["background"] = model_to_json(m.background());
    return j.dump(1) + "\n";
}

LikelihoodModel classifier_from_string(const std::string& text) {
    try {
        json j = parse_checked(text);
        if (!j.is_object() || j.value("format", "") != kClassifierFormat)
            throw FormatError("classifier document: unrecognized format tag");
        if (j.value("version", -1) != kVersion)
            throw FormatError("classifier document: unsupported version");
        double epsilon = j.at("epsilon").get<double>();
        DensityModel sig = model_from_json(j.at("signal"));
        DensityModel bkg = model_from_json(j.at("background"));
        return LikelihoodModel(std::move(sig), std::move(bkg), epsilon);
    } catch (const json::exception& e) {
        throw FormatError(std::string("classifier document: ") + e.what());
    }
}

void save_classifier(const LikelihoodModel& m, const std::string& path) {
    write_file(path, classifier_to_string(m));
}

LikelihoodModel load_classifier(const std::string& path) {
    return classifier_from_string(read_file(path));
}

} // namespace greendens

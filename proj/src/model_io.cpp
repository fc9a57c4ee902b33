#include "mixdiag/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "mixdiag/errors.hpp"

namespace mixdiag {

namespace {

using nlohmann::json;

json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixXd matrix_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw OutOfRange(std::string("model file: field '") + field +
                         "' must be an array of arrays");
    const auto rows = j.size();
    const auto cols = j.front().size();
    if (cols == 0) throw OutOfRange(std::string("model file: empty rows in '") + field + "'");
    MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw OutOfRange(std::string("model file: ragged matrix in '") + field + "'");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw OutOfRange(std::string("model file: non-numeric entry in '") + field + "'");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                j[i][k].get<double>();
        }
    }
    return m;
}

} // namespace

std::string model_to_string(const AnyModel& model) {
    json j;
    if (const auto* var = std::get_if<Var1Model>(&model)) {
        j["p"] = var->p;
        j["k"] = var->k;
        j["A"] = matrix_to_json(var->A);
        j["sigma_xi"] = matrix_to_json(var->sigma_xi);
    } else {
        const auto& varma = std::get<Varma11Model>(model);
        j["p"] = varma.p;
        j["k"] = varma.k;
        j["Lambda"] = matrix_to_json(varma.Lambda);
        j["H"] = matrix_to_json(varma.H);
        j["sigma_eta"] = matrix_to_json(varma.sigma_eta);
        j["sigma_xi"] = matrix_to_json(varma.sigma_xi);
    }
    return j.dump(2) + "\n";
}

AnyModel model_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw OutOfRange(std::string("model file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("k") || !j.contains("sigma_xi"))
        throw OutOfRange("model file: need fields p, k, sigma_xi");

    const int p = j.at("p").get<int>();
    const int k = j.at("k").get<int>();
    const MatrixXd sigma_xi = matrix_from_json(j.at("sigma_xi"), "sigma_xi");
    if (sigma_xi.rows() != p)
        throw DimensionMismatch("model file: sigma_xi does not match p");

    if (j.contains("A")) {
        const Var1Model model = make_var1(matrix_from_json(j.at("A"), "A"), sigma_xi);
        if (model.p != p) throw DimensionMismatch("model file: A does not match p");
        if (model.k != k)
            throw OutOfRange("model file: declared k = " + std::to_string(k) +
                             " but rank(A) = " + std::to_string(model.k));
        return model;
    }
    if (j.contains("Lambda") && j.contains("H") && j.contains("sigma_eta")) {
        const Varma11Model model =
            make_varma11(matrix_from_json(j.at("Lambda"), "Lambda"),
                         matrix_from_json(j.at("H"), "H"),
                         matrix_from_json(j.at("sigma_eta"), "sigma_eta"), sigma_xi);
        if (model.p != p) throw DimensionMismatch("model file: Lambda does not match p");
        if (model.k != k)
            throw OutOfRange("model file: declared k = " + std::to_string(k) +
                             " but Lambda has " + std::to_string(model.k) + " columns");
        return model;
    }
    throw OutOfRange("model file: need either A or (Lambda, H, sigma_eta)");
}

void save_model(const std::string& path, const AnyModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutOfRange("save_model: cannot open " + path);
    out << model_to_string(model);
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutOfRange("load_model: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_string(text);
}

std::string certificate_to_string(const AssumptionCertificate& cert) {
    json j;
    j["model_kind"] = cert.varma ? "varma11" : "var1";
    j["k_declared"] = cert.k_declared;
    j["k_measured"] = cert.k_measured;
    j["lambda_min_sigma_xi"] = cert.lambda_min_sigma_xi;
    j["lambda_max_gamma"] = cert.lambda_max_gamma;
    j["transition_norm"] = cert.transition_norm;
    j["delta"] = cert.delta;
    j["zeta"] = cert.zeta;
    j["rank_pass"] = cert.rank_pass;
    j["noise_floor_pass"] = cert.noise_floor_pass;
    j["cov_ceiling_pass"] = cert.cov_ceiling_pass;
    j["contraction_pass"] = cert.contraction_pass;
    j["noise_floor_margin"] = cert.noise_floor_margin;
    j["cov_ceiling_margin"] = cert.cov_ceiling_margin;
    j["contraction_margin"] = cert.contraction_margin;
    j["passes"] = cert.passes();
    return j.dump(2) + "\n";
}

void save_certificate(const std::string& path, const AssumptionCertificate& cert) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutOfRange("save_certificate: cannot open " + path);
    out << certificate_to_string(cert);
}

int model_dimension(const AnyModel& model) {
    return std::visit([](const auto& m) { return m.p; }, model);
}

int model_rank(const AnyModel& model) {
    return std::visit([](const auto& m) { return m.k; }, model);
}

bool is_varma(const AnyModel& model) {
    return std::holds_alternative<Varma11Model>(model);
}

} // namespace mixdiag

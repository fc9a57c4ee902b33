#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>

#include <json.hpp>

#include "mixdiag/errors.hpp"
#include "mixdiag/model_io.hpp"
#include "mixdiag/stationary.hpp"

using namespace mixdiag;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const char* name)
        : path((std::filesystem::temp_directory_path() /
                ("mixdiag_io_" + std::to_string(::getpid()) + "_" + name))
                   .string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("model round trips preserve every matrix entry") {
    SUBCASE("var1") {
        const Var1Model m = random_var1(5, 2, 0.5, 0.1, 10.0, 42);
        const AnyModel loaded = model_from_string(model_to_string(m));
        const auto& back = std::get<Var1Model>(loaded);
        CHECK(back.A == m.A);
        CHECK(back.sigma_xi == m.sigma_xi);
        CHECK(back.k == m.k);
        CHECK(back.p == m.p);
    }
    SUBCASE("varma11") {
        const Varma11Model m = random_varma11(6, 2, 0.4, 0.1, 12.0, 9);
        const AnyModel loaded = model_from_string(model_to_string(m));
        const auto& back = std::get<Varma11Model>(loaded);
        CHECK(back.Lambda == m.Lambda);
        CHECK(back.H == m.H);
        CHECK(back.sigma_eta == m.sigma_eta);
        CHECK(back.sigma_xi == m.sigma_xi);
        // L is derived on load from the same inputs.
        CHECK((back.L - m.L).norm() == 0.0);
    }
    SUBCASE("file round trip") {
        TempFile file("roundtrip.json");
        const Var1Model m = random_var1(3, 1, 0.5, 0.1, 10.0, 1);
        save_model(file.path, m);
        const AnyModel loaded = load_model(file.path);
        CHECK(std::get<Var1Model>(loaded).A == m.A);
    }
}

TEST_CASE("model files carry the exact field names") {
    const Var1Model var = random_var1(2, 1, 0.5, 0.1, 10.0, 5);
    const auto jv = nlohmann::json::parse(model_to_string(var));
    CHECK(jv.contains("p"));
    CHECK(jv.contains("k"));
    CHECK(jv.contains("A"));
    CHECK(jv.contains("sigma_xi"));
    CHECK(jv.at("A").is_array());
    CHECK(jv.at("A").size() == 2);
    CHECK(jv.at("A").at(0).size() == 2);
    CHECK(jv.at("A").at(0).at(0).get<double>() == var.A(0, 0));  // row-major

    const Varma11Model varma = random_varma11(4, 2, 0.4, 0.1, 12.0, 6);
    const auto jm = nlohmann::json::parse(model_to_string(varma));
    for (const char* field : {"p", "k", "Lambda", "H", "sigma_eta", "sigma_xi"})
        CHECK(jm.contains(field));
    CHECK_FALSE(jm.contains("L"));
    CHECK(jm.at("Lambda").size() == 4);
    CHECK(jm.at("Lambda").at(0).size() == 2);
}

TEST_CASE("malformed model files are rejected") {
    CHECK_THROWS_AS(model_from_string("not json"), OutOfRange);
    CHECK_THROWS_AS(model_from_string("{\"p\": 2, \"k\": 0}"), OutOfRange);
    CHECK_THROWS_AS(
        model_from_string(R"({"p": 2, "k": 0, "sigma_xi": [[1, 0], [0]]})"), OutOfRange);
    CHECK_THROWS_AS(
        model_from_string(
            R"({"p": 2, "k": 1, "A": [[0, 0], [0, 0]], "sigma_xi": [[1, 0], [0, 1]]})"),
        OutOfRange);  // declared rank disagrees with rank(A)
    CHECK_THROWS_AS(
        model_from_string(
            R"({"p": 3, "k": 0, "A": [[0, 0], [0, 0]], "sigma_xi": [[1, 0], [0, 1]]})"),
        DimensionMismatch);
    // Loaded models re-validate stability.
    CHECK_THROWS_AS(
        model_from_string(
            R"({"p": 1, "k": 1, "A": [[1.2]], "sigma_xi": [[1.0]]})"),
        NotStable);
}

TEST_CASE("certificates serialize their flags and margins") {
    const Var1Model m = random_var1(4, 2, 0.5, 0.1, 10.0, 77);
    const MatrixXd gamma = solve_stationary_var1(m);
    const AssumptionCertificate cert = certify_assumptions(m, 0.1, 10.0, gamma);
    const auto j = nlohmann::json::parse(certificate_to_string(cert));
    CHECK(j.at("model_kind") == "var1");
    CHECK(j.at("k_measured").get<int>() == 2);
    CHECK(j.at("passes").get<bool>());
    CHECK(j.at("noise_floor_margin").get<double>() == cert.noise_floor_margin);
}

#include <cvdyn/json_io.hpp>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>

namespace cvdyn::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what, const std::string& detail) {
    throw std::invalid_argument(what + ": " + detail);
}

void require_fields(const json& j, const std::string& what,
                    std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        fail(what, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known)
            fail(what, "unknown field '" + item.key() + "'");
    }
}

double finite_number(const json& j, const std::string& what) {
    if (!j.is_number())
        fail(what, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail(what, "value must be finite");
    return v;
}

std::complex<double> complex_entry(const json& j, const std::string& what) {
    if (j.is_number())
        return {finite_number(j, what), 0.0};
    if (j.is_array() && j.size() == 2)
        return {finite_number(j[0], what), finite_number(j[1], what)};
    fail(what, "expected a number or an [re, im] pair");
}

} // namespace

json to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const CMat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const GaussianState& state) {
    json j;
    j["mean"] = json::array();
    for (Eigen::Index i = 0; i < state.mean.size(); ++i)
        j["mean"].push_back(state.mean(i));
    j["cov"] = to_json(state.cov);
    return j;
}

json to_json(const QuadraticGenerator& gen) {
    json j;
    j["hamiltonian"] = to_json(gen.hamiltonian);
    j["kossakowski"] = to_json(gen.kossakowski);
    return j;
}

json to_json(const gravity::Scenario& s) {
    json j;
    j["mass_kg"] = s.mass_kg;
    j["distance_m"] = s.distance_m;
    j["trap_frequency_rad_s"] = s.trap_frequency_rad_s;
    j["r0_m"] = s.r0_m;
    j["model"] = to_string(s.model);
    j["constants"] = {{"G", s.constants.newton_g}, {"hbar", s.constants.hbar}};
    return j;
}

Mat mat_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty())
        fail(what, "expected a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty())
        fail(what, "expected rows to be nonempty arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            fail(what, "rows have inconsistent lengths");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = finite_number(j[i][k], what);
    }
    return m;
}

CMat cmat_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty())
        fail(what, "expected a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array() || j[0].empty())
        fail(what, "expected rows to be nonempty arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
            fail(what, "rows have inconsistent lengths");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = complex_entry(j[i][k], what);
    }
    return m;
}

GaussianState state_from_json(const json& j) {
    require_fields(j, "state", {"mean", "cov"});
    if (!j.contains("mean") || !j.contains("cov"))
        fail("state", "fields 'mean' and 'cov' are required");
    if (!j["mean"].is_array() || j["mean"].empty())
        fail("state", "'mean' must be a nonempty array");
    GaussianState st;
    st.mean = Vec(static_cast<Eigen::Index>(j["mean"].size()));
    for (Eigen::Index i = 0; i < st.mean.size(); ++i)
        st.mean(i) = finite_number(j["mean"][i], "state mean");
    st.cov = mat_from_json(j["cov"], "state cov");
    if (st.mean.size() % 2 != 0)
        fail("state", "mean length must be even");
    if (st.cov.rows() != st.mean.size() || st.cov.cols() != st.mean.size())
        fail("state", "cov shape does not match the mean length");
    if ((st.cov - st.cov.transpose()).cwiseAbs().maxCoeff() > default_tol(st.cov))
        fail("state", "cov must be symmetric");
    return st;
}

QuadraticGenerator generator_from_json(const json& j) {
    require_fields(j, "generator", {"hamiltonian", "kossakowski"});
    if (!j.contains("hamiltonian") || !j.contains("kossakowski"))
        fail("generator", "fields 'hamiltonian' and 'kossakowski' are required");
    QuadraticGenerator gen;
    gen.hamiltonian = mat_from_json(j["hamiltonian"], "generator hamiltonian");
    gen.kossakowski = cmat_from_json(j["kossakowski"], "generator kossakowski");
    validate(gen);
    return gen;
}

gravity::Scenario scenario_from_json(const json& j) {
    require_fields(j, "scenario",
                   {"mass_kg", "distance_m", "trap_frequency_rad_s", "r0_m", "model",
                    "constants"});
    gravity::Scenario s;
    if (j.contains("mass_kg"))
        s.mass_kg = finite_number(j["mass_kg"], "scenario mass_kg");
    if (j.contains("distance_m"))
        s.distance_m = finite_number(j["distance_m"], "scenario distance_m");
    if (j.contains("trap_frequency_rad_s"))
        s.trap_frequency_rad_s =
            finite_number(j["trap_frequency_rad_s"], "scenario trap_frequency_rad_s");
    if (j.contains("r0_m"))
        s.r0_m = finite_number(j["r0_m"], "scenario r0_m");
    if (j.contains("model")) {
        if (!j["model"].is_string())
            fail("scenario", "'model' must be a string");
        s.model = model_from_string(j["model"].get<std::string>());
    }
    if (j.contains("constants")) {
        const json& c = j["constants"];
        require_fields(c, "scenario constants", {"G", "hbar"});
        if (c.contains("G"))
            s.constants.newton_g = finite_number(c["G"], "constants G");
        if (c.contains("hbar"))
            s.constants.hbar = finite_number(c["hbar"], "constants hbar");
    }
    return s;
}

std::string to_string(gravity::Model m) {
    switch (m) {
    case gravity::Model::newton:
        return "newton";
    case gravity::Model::naive:
        return "naive";
    case gravity::Model::td:
        return "td";
    }
    throw std::logic_error("to_string: unhandled model");
}

gravity::Model model_from_string(const std::string& name) {
    if (name == "newton")
        return gravity::Model::newton;
    if (name == "naive")
        return gravity::Model::naive;
    if (name == "td")
        return gravity::Model::td;
    throw std::invalid_argument("model must be one of newton, naive, td (got '" + name + "')");
}

} // namespace cvdyn::io

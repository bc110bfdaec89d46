#pragma once

// Serialization: JSON state files and deterministic CSV scan output.
//
// State file layout:
//   { "dim": D, "kind": "pure"|"mixed", "data": [...], "meta": {...} }
// where data is a D x D (pure) or D^2 x D^2 (mixed) nested array of
// [re, im] pairs, and meta carries generator provenance (free-form).

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fock.hpp"
#include "gaussian.hpp"
#include "linalg.hpp"

namespace nge {

using Json = nlohmann::json;

inline Json matrix_to_json(const CMat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMat matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("matrix_from_json: expected nonempty array");
    const Eigen::Index rows = Eigen::Index(j.size());
    const Eigen::Index cols = Eigen::Index(j.at(0).size());
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j.at(i);
        if (Eigen::Index(row.size()) != cols)
            throw std::invalid_argument("matrix_from_json: ragged rows");
        for (Eigen::Index k = 0; k < cols; ++k) {
            const Json& cell = row.at(k);
            if (!cell.is_array() || cell.size() != 2)
                throw std::invalid_argument("matrix_from_json: cell is not [re, im]");
            m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return m;
}

inline Json state_to_json(const PureState& psi, Json meta = Json::object()) {
    psi.validate();
    return Json{{"dim", psi.dim()},
                {"kind", "pure"},
                {"leak_tol", psi.trunc.leak_tol},
                {"leakage", leakage(psi)},
                {"data", matrix_to_json(psi.coeffs)},
                {"meta", std::move(meta)}};
}

inline Json state_to_json(const MixedState& rho, Json meta = Json::object()) {
    return Json{{"dim", rho.dim()},
                {"kind", "mixed"},
                {"leak_tol", rho.trunc.leak_tol},
                {"leakage", leakage(rho)},
                {"data", matrix_to_json(rho.rho)},
                {"meta", std::move(meta)}};
}

struct LoadedState {
    bool is_pure = false;
    PureState pure;
    MixedState mixed;

    int dim() const { return is_pure ? pure.dim() : mixed.dim(); }
    MixedState as_mixed() const { return is_pure ? to_density(pure) : mixed; }
};

// psd_tol is relaxed relative to exact constructions because mixed inputs
// typically come from the Lindblad integrator.
inline LoadedState state_from_json(const Json& j, double psd_tol = -1e-6) {
    LoadedState out;
    const int dim = j.at("dim").get<int>();
    TruncationPolicy trunc;
    trunc.dim_per_mode = dim;
    trunc.leak_tol = j.value("leak_tol", 1e-6);
    const std::string kind = j.at("kind").get<std::string>();
    CMat data = matrix_from_json(j.at("data"));
    if (kind == "pure") {
        out.is_pure = true;
        out.pure.trunc = trunc;
        out.pure.coeffs = std::move(data);
        out.pure.validate();
    } else if (kind == "mixed") {
        out.is_pure = false;
        out.mixed.trunc = trunc;
        out.mixed.rho = std::move(data);
        out.mixed.validate(psd_tol);
    } else {
        throw std::invalid_argument("state_from_json: kind must be 'pure' or 'mixed'");
    }
    return out;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_json_file: cannot open " + path);
    f << j.dump(2) << "\n";
    if (!f) throw std::runtime_error("write_json_file: write failed for " + path);
}

inline Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("read_json_file: cannot open " + path);
    return Json::parse(f);
}

// Deterministic CSV: fixed 17-significant-digit formatting so identical runs
// produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_comment(const std::string& line) { comments_.push_back(line); }

    void add_row(const std::vector<double>& row) {
        if (row.size() != header_.size())
            throw std::invalid_argument("CsvWriter: row width does not match header");
        rows_.push_back(row);
    }

    std::string str() const {
        std::ostringstream os;
        for (const std::string& c : comments_) os << "# " << c << "\n";
        for (std::size_t i = 0; i < header_.size(); ++i)
            os << header_[i] << (i + 1 < header_.size() ? "," : "");
        os << "\n";
        os << std::setprecision(17);
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? "," : "");
            os << "\n";
        }
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("CsvWriter: cannot open " + path);
        f << str();
        if (!f) throw std::runtime_error("CsvWriter: write failed for " + path);
    }

private:
    std::vector<std::string> header_;
    std::vector<std::string> comments_;
    std::vector<std::vector<double>> rows_;
};

inline Json params_to_json(const GaussianParams7& p) {
    return Json::array({p.theta_I0, p.theta_I, p.theta_I1, p.theta_I2,
                        p.theta_II0, p.theta_II, p.r});
}

inline GaussianParams7 params_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 7)
        throw std::invalid_argument("params_from_json: expected 7-entry array");
    GaussianParams7 p;
    p.theta_I0 = j.at(0).get<double>();
    p.theta_I = j.at(1).get<double>();
    p.theta_I1 = j.at(2).get<double>();
    p.theta_I2 = j.at(3).get<double>();
    p.theta_II0 = j.at(4).get<double>();
    p.theta_II = j.at(5).get<double>();
    p.r = j.at(6).get<double>();
    return p;
}

} // namespace nge

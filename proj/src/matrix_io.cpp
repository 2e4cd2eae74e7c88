#include "spt/matrix_io.hpp"

#include <fstream>
#include <stdexcept>

namespace spt {

nlohmann::json to_json(const Matrix& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> r;
        std::vector<double> c;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j).real());
            c.push_back(m(i, j).imag());
        }
        re.push_back(r);
        im.push_back(c);
    }
    return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

HermitianOperator hermitian_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
        throw std::invalid_argument("matrix json: expected {\"dim\", \"re\", \"im\"}");
    }
    const auto n = j.at("dim").get<Eigen::Index>();
    if (n < 1) {
        throw std::invalid_argument("matrix json: dim must be >= 1");
    }
    const auto& re = j.at("re");
    const bool has_im = j.contains("im");
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = re.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != n) {
            throw std::invalid_argument("matrix json: row " + std::to_string(r) + " has wrong length");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            const double im = has_im ? j.at("im").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>()
                                     : 0.0;
            m(r, c) = Complex{row.at(static_cast<std::size_t>(c)).get<double>(), im};
        }
    }
    return HermitianOperator(m);
}

HermitianOperator load_hermitian(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open matrix file " + path);
    }
    return hermitian_from_json(nlohmann::json::parse(in));
}

void save_matrix(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << to_json(m).dump(2) << '\n';
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

namespace {

Matrix gue(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(i, j) = Complex{re, im};
        }
    }
    return 0.5 * (a + a.adjoint());
}

}  // namespace

HermitianOperator random_hermitian(std::mt19937_64& rng, std::size_t dim, const Interval& range) {
    if (dim == 0) {
        throw std::invalid_argument("random_hermitian: dim must be >= 1");
    }
    const Matrix h = gue(rng, dim);
    const auto n = static_cast<Eigen::Index>(dim);
    if (dim == 1) {
        std::uniform_real_distribution<double> uni(range.lo, range.hi);
        return HermitianOperator(Matrix::Constant(1, 1, Complex{uni(rng), 0.0}));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues()(0);
    const double hi = solver.eigenvalues()(n - 1);
    const double scale = (range.hi - range.lo) / (hi - lo);
    const Matrix mapped = scale * h + (range.lo - scale * lo) * Matrix::Identity(n, n);
    return HermitianOperator(0.5 * (mapped + mapped.adjoint()));
}

HermitianOperator random_perturbation(std::mt19937_64& rng, std::size_t dim) {
    if (dim == 0) {
        throw std::invalid_argument("random_perturbation: dim must be >= 1");
    }
    const HermitianOperator v(gue(rng, dim));
    return v.scaled(1.0 / v.operator_norm());
}

}  // namespace spt

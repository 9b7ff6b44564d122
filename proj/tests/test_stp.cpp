#include "stp/model.hpp"

#include "stp/preprocess.hpp"
#include "stp/synth.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace stp;

namespace {

Ensemble ensemble_from_columns(const Matrix& q_pm, std::size_t n, std::size_t m, std::size_t p) {
    Ensemble e;
    e.horizon = HorizonSpec{n, m, p};
    e.centered = true;
    for (Eigen::Index j = 0; j < q_pm.cols(); ++j) {
        Episode ep;
        ep.values.assign(q_pm.col(j).data(), q_pm.col(j).data() + q_pm.rows());
        e.episodes.push_back(std::move(ep));
    }
    return e;
}

} // namespace

TEST_CASE("data matrices stack episodes column by column") {
    Ensemble e;
    e.horizon = HorizonSpec{1, 1, 2};
    e.centered = true;
    e.episodes.push_back(Episode{{1, 2, 3, 4}, std::nullopt});

    const Matrix q_minus = build_hindcast_matrix(e);
    REQUIRE(q_minus.rows() == 2);
    REQUIRE(q_minus.cols() == 1);
    CHECK(q_minus(0, 0) == 1.0);
    CHECK(q_minus(1, 0) == 2.0);

    const Matrix q_pm = build_prediction_matrix(e);
    REQUIRE(q_pm.rows() == 4);
    CHECK(q_pm.col(0).isApprox(Vector{{1, 2, 3, 4}}));

    e.centered = false;
    CHECK_THROWS_WITH_AS(build_hindcast_matrix(e), doctest::Contains("centered"),
                         std::invalid_argument);
    CHECK_THROWS_AS(build_prediction_matrix(e), std::invalid_argument);
}

TEST_CASE("identical episodes give identical columns; blocks line up") {
    Ensemble e = test::random_centered_ensemble(3, 6, 2, 3, 4);
    e.episodes[1] = e.episodes[0];
    const Matrix q_minus = build_hindcast_matrix(e);
    const Matrix q_pm = build_prediction_matrix(e);
    CHECK(q_minus.col(0) == q_minus.col(1));
    // Hindcast matrix is exactly the top block of the prediction matrix.
    CHECK(q_pm.topRows(q_minus.rows()) == q_minus);
    // Column norms equal episode norms.
    for (std::size_t j = 0; j < e.size(); ++j) {
        const Eigen::Map<const Vector> ep(e.episodes[j].values.data(),
                                          static_cast<Eigen::Index>(e.horizon.episode_size()));
        CHECK(q_pm.col(static_cast<Eigen::Index>(j)).norm() == doctest::Approx(ep.norm()));
    }
}

TEST_CASE("hindcast correlation") {
    SUBCASE("single episode") {
        Matrix q(2, 1);
        q << 1, 2;
        const Matrix c = hindcast_correlation(q, WeightVector::uniform(2));
        REQUIRE(c.rows() == 1);
        CHECK(c(0, 0) == doctest::Approx(5.0)); // (1 + 4) / 1
    }
    SUBCASE("identity data") {
        const Matrix c = hindcast_correlation(Matrix::Identity(2, 2), WeightVector::uniform(2));
        CHECK(test::max_abs(c - 0.5 * Matrix::Identity(2, 2)) == 0.0);
    }
    SUBCASE("uniform weight 2 doubles the correlation") {
        const Matrix q = test::random_matrix(41, 6, 4);
        WeightVector two{Vector::Constant(3, 2.0)}; // p=3, n=2
        const Matrix weighted = hindcast_correlation(q, two);
        const Matrix unweighted = hindcast_correlation(q, WeightVector::uniform(3));
        CHECK(test::max_abs(weighted - 2.0 * unweighted) <= 1e-15 * test::max_abs(weighted));
    }
    SUBCASE("weight length must divide the row count") {
        CHECK_THROWS_AS(hindcast_correlation(Matrix::Zero(5, 2), WeightVector::uniform(2)),
                        std::invalid_argument);
    }
}

TEST_CASE("solve_pod clamps round-off negatives and checks the trace") {
    SUBCASE("scaled identity") {
        const linalg::EigResult eig = solve_pod((0.5 * Matrix::Identity(2, 2)).eval());
        CHECK(eig.eigenvalues(0) == doctest::Approx(0.5));
        CHECK(eig.eigenvalues(1) == doctest::Approx(0.5));
    }
    SUBCASE("diagonal") {
        Matrix c(2, 2);
        c << 2, 0, 0, 0.5;
        const linalg::EigResult eig = solve_pod(c);
        CHECK(eig.eigenvalues(0) == 2.0);
        CHECK(eig.eigenvalues(1) == 0.5);
        CHECK(eig.eigenvectors == Matrix::Identity(2, 2));
    }
    SUBCASE("trace identity on a random correlation matrix") {
        const Matrix q = test::random_matrix(43, 40, 12);
        const Matrix c = hindcast_correlation(q, WeightVector::uniform(8));
        const linalg::EigResult eig = solve_pod(c);
        CHECK(eig.eigenvalues.sum() == doctest::Approx(c.trace()).epsilon(1e-10));
        CHECK(eig.eigenvalues.minCoeff() >= 0.0);
    }
    SUBCASE("indefinite input is rejected") {
        Matrix c(2, 2);
        c << 1, 0, 0, -1;
        CHECK_THROWS_WITH_AS(solve_pod(c), doctest::Contains("positive semidefinite"),
                             std::invalid_argument);
    }
}

TEST_CASE("truncate keeps leading eigenpairs and applies the rank guard") {
    linalg::EigResult eig;
    eig.eigenvalues = Vector{{2.0, 0.5}};
    eig.eigenvectors = Matrix::Identity(2, 2);

    SUBCASE("full rank is the identity operation") {
        const TruncationResult r = truncate(eig, 2);
        CHECK(r.effective == 2);
        CHECK(r.eig.eigenvalues == eig.eigenvalues);
        CHECK(r.eig.eigenvectors == eig.eigenvectors);
    }
    SUBCASE("rank one keeps the first column") {
        const TruncationResult r = truncate(eig, 1);
        CHECK(r.effective == 1);
        CHECK(r.eig.eigenvalues.size() == 1);
        CHECK(r.eig.eigenvalues(0) == 2.0);
        CHECK(r.eig.eigenvectors.cols() == 1);
    }
    SUBCASE("the epsilon guard drops numerically zero modes") {
        linalg::EigResult tiny;
        tiny.eigenvalues = Vector{{1.0, 1e-18, 0.0}};
        tiny.eigenvectors = Matrix::Identity(3, 3);
        const TruncationResult r = truncate(tiny, 3);
        CHECK(r.requested == 3);
        CHECK(r.effective == 1);
    }
    SUBCASE("out-of-range ranks are rejected") {
        CHECK_THROWS_AS(truncate(eig, 0), std::invalid_argument);
        CHECK_THROWS_AS(truncate(eig, 3), std::invalid_argument);
    }
}

TEST_CASE("hindcast modes normalize to an orthonormal basis") {
    SUBCASE("two diagonal episodes") {
        // Q- = diag(2, 1), k = 2: C- = diag(2, 0.5), Psi = I, so
        // Phi = (1/sqrt(2)) diag(2,1) diag(1/sqrt(2), sqrt(2)) = I.
        Matrix q(2, 2);
        q << 2, 0, 0, 1;
        const linalg::EigResult eig = solve_pod(hindcast_correlation(q, WeightVector::uniform(2)));
        const Matrix phi = hindcast_modes(q, eig, 2);
        CHECK(test::max_abs(phi - Matrix::Identity(2, 2)) <= 1e-14);
    }
    SUBCASE("a single episode normalizes to a unit vector") {
        Matrix q(3, 1);
        q << 2, 4, 4; // norm 6
        const linalg::EigResult eig = solve_pod(hindcast_correlation(q, WeightVector::uniform(3)));
        const Matrix phi = hindcast_modes(q, eig, 1);
        CHECK(test::max_abs(phi - q / 6.0) <= 1e-14);
    }
    SUBCASE("random ensembles give W-orthonormal modes") {
        const std::size_t n = 3, p = 5, k = 12;
        const Matrix q = test::random_matrix(57, n * p, k);
        const WeightVector w = test::random_weights(58, p);
        const linalg::EigResult eig = solve_pod(hindcast_correlation(q, w));
        const Matrix phi = hindcast_modes(q, eig, k);
        Matrix wphi = phi;
        for (std::size_t i = 0; i < n; ++i) {
            wphi.middleRows(static_cast<Eigen::Index>(i * p), static_cast<Eigen::Index>(p))
                .array().colwise() *= w.values.array();
        }
        CHECK(test::max_abs(wphi.transpose() * phi - Matrix::Identity(k, k)) <= 1e-10);
    }
    SUBCASE("zero retained eigenvalues are an error") {
        linalg::EigResult eig;
        eig.eigenvalues = Vector::Zero(1);
        eig.eigenvectors = Matrix::Identity(1, 1);
        CHECK_THROWS_WITH_AS(hindcast_modes(Matrix::Identity(1, 1), eig, 1),
                             doctest::Contains("not positive"), std::invalid_argument);
    }
}

TEST_CASE("expansion coefficients and their identities") {
    const std::size_t n = 2, p = 5, k = 8; // k <= n*p keeps the sample matrix full rank
    const Matrix q = test::random_matrix(61, n * p, k);
    const WeightVector w = test::random_weights(62, p);
    const linalg::EigResult eig = solve_pod(hindcast_correlation(q, w));
    const Matrix phi = hindcast_modes(q, eig, k);
    const Matrix a = expansion_coefficients(phi, w, q);

    SUBCASE("projecting the modes themselves yields the identity") {
        const Matrix self = expansion_coefficients(phi, w, phi);
        CHECK(test::max_abs(self - Matrix::Identity(k, k)) <= 1e-10);
    }
    SUBCASE("A = sqrt(k) Lambda^(1/2) Psi^T") {
        const Matrix expected = std::sqrt(static_cast<double>(k)) *
                                eig.eigenvalues.cwiseSqrt().asDiagonal() *
                                eig.eigenvectors.transpose();
        CHECK(test::max_abs(a - expected) <= 1e-9 * test::max_abs(expected));
    }
    SUBCASE("coefficient rows are orthogonal: (1/k) A A^T = Lambda") {
        const Matrix gram = a * a.transpose() / static_cast<double>(k);
        const Matrix lambda = Matrix(eig.eigenvalues.asDiagonal());
        CHECK(test::max_abs(gram - lambda) <= 1e-9 * std::max(1.0, eig.eigenvalues(0)));
    }
    SUBCASE("data expansion Q = Phi A holds") {
        CHECK(test::max_abs(phi * a - q) <= 1e-9 * test::max_abs(q));
    }
    SUBCASE("rank-1 data concentrates on the first row") {
        Vector direction = test::random_matrix(63, n * p, 1).col(0);
        direction.normalize();
        Matrix rank1(n * p, 5);
        Vector coeffs(5);
        coeffs << 3.0, -1.0, 0.5, 2.0, -2.5;
        for (Eigen::Index j = 0; j < 5; ++j) rank1.col(j) = coeffs(j) * direction;
        const WeightVector uniform = WeightVector::uniform(p);
        const linalg::EigResult e1 = solve_pod(hindcast_correlation(rank1, uniform));
        const TruncationResult kept = truncate(e1, 5);
        REQUIRE(kept.effective == 1);
        const Matrix phi1 = hindcast_modes(rank1, kept.eig, 5);
        const Matrix a1 = expansion_coefficients(phi1, uniform, rank1);
        REQUIRE(a1.rows() == 1);
        // Row equals the coefficients up to the basis sign.
        const double sign = phi1.col(0).dot(direction) > 0 ? 1.0 : -1.0;
        CHECK(test::rel_err(a1.row(0).transpose(), sign * coeffs) <= 1e-10);
    }
}

TEST_CASE("stp_modes extends the hindcast modes") {
    const std::size_t n = 2, m = 3, p = 4, k = 7; // k < n*p: every eigenvalue stays positive
    Ensemble e = test::random_centered_ensemble(71, k, n, m, p);
    const Matrix q_minus = build_hindcast_matrix(e);
    const Matrix q_pm = build_prediction_matrix(e);
    const WeightVector w = WeightVector::uniform(p);
    const linalg::EigResult eig = solve_pod(hindcast_correlation(q_minus, w));

    SUBCASE("an empty forecast block reproduces the hindcast modes") {
        const Matrix via_stp = stp_modes(q_minus, eig, k);
        const Matrix via_hind = hindcast_modes(q_minus, eig, k);
        CHECK(via_stp == via_hind);
    }
    SUBCASE("top block matches the hindcast modes") {
        const Matrix extended = stp_modes(q_pm, eig, k);
        const Matrix phi = hindcast_modes(q_minus, eig, k);
        CHECK(test::max_abs(extended.topRows(q_minus.rows()) - phi) <= 1e-14);
    }
    SUBCASE("rank-1 ensembles have a single mode proportional to the generator") {
        synth::GeneratorSpec spec;
        spec.kind = synth::GeneratorKind::rank_limited;
        spec.episodes = 8;
        spec.hindcast_steps = n;
        spec.forecast_steps = m;
        spec.dof = p;
        spec.seed = 99;
        spec.true_rank = 1;
        const synth::RankLimitedData data = synth::gen_rank_limited(spec);
        Ensemble rank1 = data.ensemble;
        rank1.centered = true;
        const Matrix q = build_prediction_matrix(rank1);
        const linalg::EigResult full =
            solve_pod(hindcast_correlation(q.topRows(static_cast<Eigen::Index>(n * p)), w));
        const TruncationResult kept = truncate(full, spec.episodes);
        REQUIRE(kept.effective == 1);
        const Matrix mode = stp_modes(q, kept.eig, spec.episodes);
        const Vector psi = data.basis.col(0);
        const double cosine = std::abs(mode.col(0).dot(psi)) / (mode.col(0).norm() * psi.norm());
        CHECK(cosine == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("fit composes the pipeline") {
    SUBCASE("rank-1 synthetic data has one significant eigenvalue") {
        synth::GeneratorSpec spec;
        spec.kind = synth::GeneratorKind::rank_limited;
        spec.episodes = 50;
        spec.hindcast_steps = 3;
        spec.forecast_steps = 2;
        spec.dof = 6;
        spec.seed = 4;
        spec.true_rank = 1;
        Ensemble e = synth::gen_rank_limited(spec).ensemble;
        e.centered = true;

        const Matrix q_minus = build_hindcast_matrix(e);
        const linalg::EigResult eig =
            solve_pod(hindcast_correlation(q_minus, WeightVector::uniform(6)));
        CHECK(eig.eigenvalues(1) <= 1e-10 * eig.eigenvalues(0));

        const STPModel model = fit(e, 50, WeightVector::uniform(6));
        CHECK(model.rank == 1);
        CHECK(model.k_train == 50);
        model.validate();
    }
    SUBCASE("truncation is a suffix operation") {
        Ensemble e = test::random_centered_ensemble(81, 14, 2, 2, 5);
        const WeightVector w = WeightVector::uniform(5);
        const STPModel full = fit(e, 14, w);
        const STPModel rank1 = fit(e, 1, w);
        CHECK(full.eigenvalues(0) == doctest::Approx(rank1.eigenvalues(0)).epsilon(1e-14));
        CHECK(test::max_abs(full.modes.col(0) - rank1.modes.col(0)) <= 1e-14);

        const STPModel truncated = truncate_model(full, 5);
        const STPModel refit = fit(e, 5, w);
        CHECK(test::max_abs(truncated.modes - refit.modes) <= 1e-12);
        CHECK(truncated.rank == 5);
        CHECK_THROWS_AS(truncate_model(full, 0), std::invalid_argument);
        CHECK_THROWS_AS(truncate_model(full, full.rank + 1), std::invalid_argument);
    }
    SUBCASE("rank bounds are enforced") {
        Ensemble e = test::random_centered_ensemble(82, 5, 1, 1, 3);
        CHECK_THROWS_WITH_AS(fit(e, 6, WeightVector::uniform(3)), doctest::Contains("k = 5"),
                             std::invalid_argument);
        CHECK_THROWS_AS(fit(e, 0, WeightVector::uniform(3)), std::invalid_argument);
    }
    SUBCASE("model top block equals the hindcast modes exactly") {
        Ensemble e = test::random_centered_ensemble(83, 10, 2, 3, 4);
        const STPModel model = fit(e, 10, WeightVector::uniform(4));
        const Matrix phi = model.hindcast_modes();
        CHECK(phi == model.modes.topRows(phi.rows()));
        model.validate();
    }
}

TEST_CASE("project recovers coefficients") {
    // k = 4 episodes in a 6-dimensional hindcast space: the modes span a
    // proper subspace, so W-orthogonal inputs exist.
    Ensemble e = test::random_centered_ensemble(91, 4, 2, 2, 3);
    const WeightVector w = test::random_weights(92, 3);
    const STPModel model = fit(e, 4, w);
    const Matrix phi = model.hindcast_modes();

    SUBCASE("basis columns map to unit coefficient vectors") {
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(model.rank); ++j) {
            const Vector a = project(model, phi.col(j));
            Vector expected = Vector::Zero(static_cast<Eigen::Index>(model.rank));
            expected(j) = 1.0;
            CHECK(test::rel_err(a, expected) <= 1e-10);
        }
    }
    SUBCASE("orthogonal inputs map to zero") {
        // Build a vector W-orthogonal to every mode by projecting it out.
        Vector v = test::random_matrix(93, phi.rows(), 1).col(0);
        const Vector w_rep = model.weights.replicated(model.horizon.hindcast_steps);
        v -= phi * (phi.transpose() * w_rep.cwiseProduct(v));
        const Vector a = project(model, v);
        CHECK(a.cwiseAbs().maxCoeff() <= 1e-10 * v.norm());
    }
    SUBCASE("training episodes reproduce the expansion coefficient columns") {
        const Matrix q_minus = build_hindcast_matrix(e);
        const Matrix a_full = expansion_coefficients(phi, w, q_minus);
        for (Eigen::Index j = 0; j < q_minus.cols(); ++j) {
            const Vector a = project(model, q_minus.col(j)) ;
            CHECK(test::rel_err(a, a_full.col(j)) <= 1e-10);
        }
    }
    SUBCASE("length mismatches and missing means are errors") {
        CHECK_THROWS_AS(project(model, Vector::Zero(3)), std::invalid_argument);
        CHECK_THROWS_WITH_AS(project(model, Vector::Zero(phi.rows()), true),
                             doctest::Contains("no mean"), std::invalid_argument);
    }
}

TEST_CASE("predict expands the extended basis") {
    SUBCASE("rank-1 dynamics forecast exactly") {
        synth::GeneratorSpec spec;
        spec.kind = synth::GeneratorKind::rank_limited;
        spec.episodes = 12;
        spec.hindcast_steps = 3;
        spec.forecast_steps = 4;
        spec.dof = 5;
        spec.seed = 31;
        spec.true_rank = 1;
        const synth::RankLimitedData data = synth::gen_rank_limited(spec);
        Ensemble e = data.ensemble;
        e.centered = true;
        const STPModel model = fit(e, 12, WeightVector::uniform(5));
        REQUIRE(model.rank == 1);

        const auto np = static_cast<Eigen::Index>(model.horizon.hindcast_size());
        const double scale = 2.75;
        const Vector q_new = scale * data.basis.col(0);
        const Prediction pr = predict(model, q_new.head(np));
        CHECK(test::rel_err(pr.forecast, (scale * data.basis.col(0).tail(pr.forecast.size())).eval())
              <= 1e-10);
        // The stacked output is exactly modes * coefficients.
        Vector stacked(pr.hindcast.size() + pr.forecast.size());
        stacked << pr.hindcast, pr.forecast;
        CHECK(test::max_abs(stacked - model.modes * pr.coefficients) <= 1e-12);
    }
    SUBCASE("in-span hindcasts reconstruct at full rank") {
        Ensemble e = test::random_centered_ensemble(101, 9, 2, 2, 4);
        const STPModel model = fit(e, 9, WeightVector::uniform(4));
        const Matrix q_minus = build_hindcast_matrix(e);
        for (Eigen::Index j = 0; j < q_minus.cols(); ++j) {
            const Prediction pr = predict(model, q_minus.col(j));
            CHECK(test::rel_err(pr.hindcast, q_minus.col(j)) <= 1e-8);
        }
    }
    SUBCASE("zero input yields zero output, or the mean when re-added") {
        Ensemble e = test::random_centered_ensemble(102, 6, 2, 2, 3);
        MeanField mean{MeanKind::ensemble_mean,
                       test::random_matrix(103, static_cast<Eigen::Index>(e.horizon.episode_size()), 1)
                           .col(0)};
        const STPModel model = fit(e, 6, WeightVector::uniform(3), mean);

        const Vector zero = Vector::Zero(static_cast<Eigen::Index>(e.horizon.hindcast_size()));
        const Prediction bare = predict(model, zero);
        CHECK(bare.hindcast.cwiseAbs().maxCoeff() == 0.0);
        CHECK(bare.forecast.cwiseAbs().maxCoeff() == 0.0);
        CHECK_FALSE(bare.mean_added);

        const Prediction restored = predict(model, zero, PredictOptions{false, true});
        CHECK(restored.mean_added);
        CHECK(test::rel_err(restored.forecast, mean.forecast_part(e.horizon)) <= 1e-14);

        // Raw input equal to the hindcast mean also projects to zero.
        const Prediction from_raw =
            predict(model, mean.hindcast_part(e.horizon), PredictOptions{true, false});
        CHECK(from_raw.hindcast.cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("prediction is linear in the input") {
        Ensemble e = test::random_centered_ensemble(104, 7, 2, 3, 3);
        const STPModel model = fit(e, 7, WeightVector::uniform(3));
        const Vector q = test::random_matrix(105, static_cast<Eigen::Index>(e.horizon.hindcast_size()), 1).col(0);
        const Prediction one = predict(model, q);
        const Prediction scaled = predict(model, (3.5 * q).eval());
        CHECK(test::rel_err(scaled.forecast, (3.5 * one.forecast).eval()) <= 1e-12);
        CHECK(test::rel_err(scaled.hindcast, (3.5 * one.hindcast).eval()) <= 1e-12);
    }
}

TEST_CASE("hindcast reconstruction error is non-increasing in rank") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Ensemble e = test::random_centered_ensemble(200 + seed, 12, 2, 2, 6);
        const STPModel full = fit(e, 12, WeightVector::uniform(6));
        const Vector q_new =
            test::random_matrix(300 + seed, static_cast<Eigen::Index>(e.horizon.hindcast_size()), 1)
                .col(0);
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t r = 1; r <= full.rank; ++r) {
            const Prediction pr = predict(truncate_model(full, r), q_new);
            const double err = (q_new - pr.hindcast).norm();
            CHECK(err <= previous * (1.0 + 1e-12) + 1e-14);
            previous = err;
        }
    }
}

TEST_CASE("a linear hindcast-to-forecast map is learned exactly") {
    synth::GeneratorSpec spec;
    spec.kind = synth::GeneratorKind::linear_map;
    spec.episodes = 24; // k > n*p so the centered episodes span the hindcast space
    spec.hindcast_steps = 2;
    spec.forecast_steps = 2;
    spec.dof = 4;
    spec.seed = 55;
    spec.map_kind = synth::MapKind::random;
    spec.map_scale = 1.3;
    const synth::LinearMapData data = synth::gen_linear_map(spec);

    const auto [train, mean] = center_transient(data.ensemble);
    const STPModel model = fit(train, train.size(), WeightVector::uniform(4), mean);

    const auto np = static_cast<Eigen::Index>(model.horizon.hindcast_size());
    const Vector q_new = test::random_matrix(56, np, 1).col(0);
    const Prediction pr = predict(model, q_new, PredictOptions{true, true});
    const Vector expected = data.map * q_new;
    CHECK(test::rel_err(pr.forecast, expected) <= 1e-8);
}

TEST_CASE("gram-path eigenvalues match the weighted SVD oracle") {
    const std::size_t n = 3, p = 4, k = 11;
    Ensemble e = test::random_centered_ensemble(111, k, n, 2, p);
    const WeightVector w = test::random_weights(112, p);
    const STPModel model = fit(e, k, w);

    Matrix scaled = build_hindcast_matrix(e);
    const Vector w_rep = w.replicated(n);
    scaled.array().colwise() *= w_rep.array().sqrt();
    scaled /= std::sqrt(static_cast<double>(k));
    const linalg::SvdResult svd = linalg::svd_oracle(scaled);

    for (std::size_t i = 0; i < model.rank; ++i) {
        const double sq = svd.singular_values(static_cast<Eigen::Index>(i)) *
                          svd.singular_values(static_cast<Eigen::Index>(i));
        CHECK(std::abs(sq - model.eigenvalues(static_cast<Eigen::Index>(i))) <=
              1e-9 * model.eigenvalues(0));
    }
}

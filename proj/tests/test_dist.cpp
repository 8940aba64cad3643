#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "oracles.hpp"
#include "stein_lasso/dist.hpp"
#include "stein_lasso/error.hpp"

using namespace stein;

namespace {

bool throws_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("NoncentralChiSq validates its parameters") {
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { NoncentralChiSq(0.5, 0.0); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { NoncentralChiSq(3, -1.0); }));
  CHECK(throws_code(ErrorCode::InvalidArgument,
                    [] { NoncentralChiSq(3, std::numeric_limits<double>::infinity()); }));
}

TEST_CASE("regularized_gamma_p matches boost") {
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0, 120.0}) {
    for (double x : {1e-3, 0.3, 1.0, 4.0, 10.0, 50.0, 200.0}) {
      CHECK(regularized_gamma_p(a, x) == doctest::Approx(boost::math::gamma_p(a, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("noncentral_chisq_cdf central reductions") {
  CHECK(noncentral_chisq_cdf(2.0, NoncentralChiSq(2, 0)) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  for (double df : {1.0, 2.0, 3.0, 7.0, 12.0, 52.0}) {
    for (double x : {0.01, 0.5, 2.0, 9.0, 30.0, 80.0}) {
      const double ref = boost::math::gamma_p(df / 2, x / 2);
      CHECK(std::abs(noncentral_chisq_cdf(x, NoncentralChiSq(df, 0)) - ref) < 1e-12);
      CHECK(std::abs(central_chisq_cdf(x, df) - ref) < 1e-12);
    }
  }
  CHECK(noncentral_chisq_cdf(0.0, NoncentralChiSq(3, 2)) == 0.0);
  CHECK(noncentral_chisq_cdf(-4.0, NoncentralChiSq(3, 2)) == 0.0);
}

TEST_CASE("noncentral_chisq_cdf agrees with boost and Monte Carlo") {
  for (double df : {2.0, 3.0, 7.0, 12.0, 52.0}) {
    for (double ncp : {0.1, 1.0, 5.0, 25.0, 200.0}) {
      for (double x : {0.5, 3.0, 10.0, 40.0, 150.0}) {
        const double got = noncentral_chisq_cdf(x, NoncentralChiSq(df, ncp));
        CHECK(std::abs(got - oracle::nc_cdf(x, df, ncp)) < 1e-10);
      }
    }
  }
  const auto mc = oracle::monte_carlo(3, 2, 5, 0, 0, 10'000'000, 101);
  CHECK(std::abs(noncentral_chisq_cdf(5, NoncentralChiSq(3, 2)) - mc.cdf) < 3e-4);
  CHECK(truncated_indicator_cdf(5, NoncentralChiSq(3, 2)) ==
        noncentral_chisq_cdf(5, NoncentralChiSq(3, 2)));
}

TEST_CASE("noncentral_chisq_cdf monotone in x, decreasing in noncentrality") {
  for (double df : {2.0, 5.0}) {
    double prev = 0.0;
    for (double x = 0.0; x < 60.0; x += 0.25) {
      const double v = noncentral_chisq_cdf(x, NoncentralChiSq(df, 3));
      CHECK(v >= prev);
      CHECK(v <= 1.0);
      prev = v;
    }
    for (double x : {1.0, 5.0, 20.0}) {
      double last = 2.0;
      for (double ncp : {0.0, 1.0, 5.0, 25.0}) {
        const double v = noncentral_chisq_cdf(x, NoncentralChiSq(df, ncp));
        CHECK(v < last);
        last = v;
      }
    }
  }
}

TEST_CASE("central_chisq_quantile") {
  CHECK(central_chisq_quantile(0.5, 2) == doctest::Approx(2 * std::numbers::ln2).epsilon(1e-10));
  CHECK(central_chisq_quantile(0.05, 10) == doctest::Approx(18.3070).epsilon(1e-5));
  for (double a : {0.01, 0.05, 0.1}) {
    for (double df : {2.0, 10.0, 50.0}) {
      const double c = central_chisq_quantile(a, df);
      CHECK(std::abs(central_chisq_cdf(c, df) - (1 - a)) < 1e-10);
      const double ref = boost::math::quantile(boost::math::complement(boost::math::chi_squared(df), a));
      CHECK(c == doctest::Approx(ref).epsilon(1e-8));
    }
  }
  for (double bad : {0.0, 1.0, -0.2, 1.5, std::nan("")}) {
    CHECK(throws_code(ErrorCode::InvalidAlpha, [&] { central_chisq_quantile(bad, 4); }));
  }
}

TEST_CASE("inv_moment central closed forms") {
  CHECK(inv_moment(1, NoncentralChiSq(10, 0)) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(inv_moment(2, NoncentralChiSq(10, 0)) == doctest::Approx(1.0 / 48).epsilon(1e-14));
  for (double df : {5.0, 9.0, 22.0}) {
    CHECK(std::abs(inv_moment(1, NoncentralChiSq(df, 0)) - 1 / (df - 2)) < 1e-12);
    CHECK(std::abs(inv_moment(2, NoncentralChiSq(df, 0)) - 1 / ((df - 2) * (df - 4))) < 1e-12);
  }
}

TEST_CASE("inv_moment against series and Monte Carlo") {
  for (double df : {5.0, 7.0, 12.0, 30.0}) {
    for (double ncp : {0.5, 4.0, 20.0, 100.0}) {
      for (int r : {1, 2}) {
        CHECK(inv_moment(r, NoncentralChiSq(df, ncp)) ==
              doctest::Approx(oracle::inv_moment_series(r, df, ncp)).epsilon(1e-11));
      }
    }
  }
  const auto mc = oracle::monte_carlo(12, 4, 0, 0, 0, 10'000'000, 202);
  CHECK(std::abs(inv_moment(1, NoncentralChiSq(12, 4)) - mc.inv1) < 3e-4);
  CHECK(std::abs(inv_moment(2, NoncentralChiSq(12, 4)) - mc.inv2) < 3e-4);
}

TEST_CASE("inv_moment decreasing in noncentrality and df") {
  for (int r : {1, 2}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double ncp : {0.0, 0.5, 2.0, 10.0, 50.0}) {
      const double v = inv_moment(r, NoncentralChiSq(8, ncp));
      CHECK(v < prev);
      prev = v;
    }
    prev = std::numeric_limits<double>::infinity();
    for (double df : {6.0, 7.0, 10.0, 20.0}) {
      const double v = inv_moment(r, NoncentralChiSq(df, 3));
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("inv_moment diverges when df <= 2r") {
  CHECK(throws_code(ErrorCode::MomentDiverges, [] { inv_moment(1, NoncentralChiSq(2, 1)); }));
  CHECK(throws_code(ErrorCode::MomentDiverges, [] { inv_moment(2, NoncentralChiSq(4, 0)); }));
  CHECK(std::isfinite(inv_moment(2, NoncentralChiSq(4.5, 0))));
}

TEST_CASE("truncated_shrink_moment reductions") {
  const NoncentralChiSq d(5, 1);
  CHECK(truncated_shrink_moment(d, 1.0, 0.0) == 0.0);
  CHECK(truncated_shrink_moment(d, 1.0, -3.0) == 0.0);
  for (double c : {0.5, 2.0, 6.0, 15.0}) {
    CHECK(std::abs(truncated_shrink_moment(d, 0.0, c) - noncentral_chisq_cdf(c, d)) < 1e-9);
  }
}

TEST_CASE("truncated_shrink_moment matches the incomplete-gamma closed form") {
  // This point has an infinite-variance Monte Carlo integrand, so the
  // termwise closed form serves as the oracle.
  const double v = truncated_shrink_moment(NoncentralChiSq(5, 1), 1.0, 1.0);
  CHECK(std::abs(v - oracle::truncated_moment_closed(5, 1, 1, 1)) < 1e-9);
  CHECK(std::abs(v - 0.0814218790985) < 1e-9);

  for (double df : {4.5, 5.0, 7.0, 12.0}) {
    for (double ncp : {0.0, 0.7, 6.0, 40.0}) {
      for (double a : {0.5, 1.0, 3.0}) {
        for (double c : {0.8, 3.0, 10.0}) {
          const double got = truncated_shrink_moment(NoncentralChiSq(df, ncp), a, c);
          const double ref = oracle::truncated_moment_closed(df, ncp, a, c);
          CHECK(std::abs(got - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
        }
      }
    }
  }
}

TEST_CASE("truncated_shrink_moment against Monte Carlo") {
  const auto mc = oracle::monte_carlo(10, 2, 0, 2, 10, 10'000'000, 303);
  CHECK(std::abs(truncated_shrink_moment(NoncentralChiSq(10, 2), 2, 10) - mc.truncated) < 3e-4);
}

TEST_CASE("truncated_shrink_moment with a huge cutoff reduces to inverse moments") {
  for (double df : {5.0, 6.0, 9.0, 14.0}) {
    for (double ncp : {0.0, 1.0, 8.0}) {
      for (double a : {0.5, 2.0, 4.0}) {
        const NoncentralChiSq d(df, ncp);
        const double full = 1 - 2 * a * inv_moment(1, d) + a * a * inv_moment(2, d);
        CHECK(std::abs(truncated_shrink_moment(d, a, 1e6) - full) < 1e-6);
      }
    }
  }
}

TEST_CASE("noncentral density matches boost") {
  for (double df : {1.0, 3.0, 8.0}) {
    for (double ncp : {0.0, 2.0, 30.0}) {
      for (double x : {0.2, 2.0, 11.0, 45.0}) {
        const double ref =
            ncp == 0 ? boost::math::pdf(boost::math::chi_squared(df), x)
                     : boost::math::pdf(boost::math::non_central_chi_squared(df, ncp), x);
        CHECK(detail::noncentral_chisq_pdf(x, NoncentralChiSq(df, ncp)) ==
              doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("no NaN across the documented domain") {
  for (double df : {1.0, 2.0, 5.0, 54.0}) {
    for (double ncp : {0.0, 1e-8, 0.3, 50.0, 2500.0}) {
      const NoncentralChiSq d(df, ncp);
      for (double x : {1e-300, 1e-6, 1.0, 1e3, 1e8}) {
        const double v = noncentral_chisq_cdf(x, d);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        const double t = truncated_shrink_moment(d, 1.5, x);
        CHECK(std::isfinite(t));
      }
    }
  }
}

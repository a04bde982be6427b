#include <gtest/gtest.h>

#include <random>

#include "nagata/field.hpp"
#include "nagata/matrix.hpp"
#include "nagata/unipoly.hpp"

using namespace nagata;

namespace {

std::vector<Field> sample_fields() {
  return {prime_field(2),  prime_field(5),  prime_field(7),        galois_field(2, 2),
          galois_field(3, 2), galois_field(2, 6), galois_field(5, 3), galois_field(13, 6),
          galois_field(3, 12)};
}

Elem random_elem(const Field& f, std::mt19937_64& rng) {
  if (!f->is_finite()) return f->from_rational(mpq_class(static_cast<long>(rng() % 41) - 20, 1 + rng() % 7));
  return f->from_code(rng() % f->order());
}

UniPoly random_poly(const Field& f, int deg, std::mt19937_64& rng) {
  std::vector<Elem> c;
  for (int i = 0; i <= deg; ++i) c.push_back(random_elem(f, rng));
  c.back() = f->one();
  return UniPoly(f, c);
}

}  // namespace

TEST(Field, InverseInF7) {
  auto f = prime_field(7);
  EXPECT_EQ(f->from_int(3).inv(), f->from_int(5));
}

TEST(Field, DefaultModuli) {
  EXPECT_EQ(galois_field(2, 2)->modulus(), (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(galois_field(3, 2)->modulus(), (std::vector<std::uint64_t>{1, 0, 1}));
  auto f9 = galois_field(3, 2);
  Elem i = f9->gen();
  EXPECT_EQ(i * i, f9->from_int(-1));
}

TEST(Field, GeneratorOfF4HasOrderThree) {
  auto f = galois_field(2, 2);
  Elem z = f->gen();
  EXPECT_FALSE(z.is_one());
  EXPECT_TRUE(z.pow(3).is_one());
  EXPECT_EQ(z * z + z + f->one(), f->zero());
}

TEST(Field, RejectsBadInput) {
  EXPECT_THROW(make_field({FieldKind::prime, 6, 1, {}}), std::invalid_argument);
  EXPECT_THROW(make_field({FieldKind::extension, 2, 7, {}}), std::invalid_argument);
  EXPECT_THROW(make_field({FieldKind::extension, 2, 2, {1, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(prime_field(5)->zero().inv(), std::domain_error);
  EXPECT_THROW(rational_field()->zero().inv(), std::domain_error);
  EXPECT_THROW(prime_field(5)->one() + prime_field(7)->one(), std::invalid_argument);
  EXPECT_THROW(galois_field(2, 70), std::invalid_argument);
}

TEST(Field, AxiomsOnRandomSamples) {
  std::mt19937_64 rng(11);
  auto fs = sample_fields();
  fs.push_back(rational_field());
  for (auto& f : fs) {
    for (int t = 0; t < 300; ++t) {
      Elem a = random_elem(f, rng), b = random_elem(f, rng), c = random_elem(f, rng);
      EXPECT_EQ(a + b, b + a);
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ((a + b) + c, a + (b + c));
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a - a, f->zero());
      EXPECT_EQ(a + (-a), f->zero());
      if (!a.is_zero()) EXPECT_TRUE((a * a.inv()).is_one());
    }
  }
}

TEST(Field, FrobeniusIsAdditiveAndHasOrderDegree) {
  std::mt19937_64 rng(3);
  for (auto& f : sample_fields()) {
    for (int t = 0; t < 50; ++t) {
      Elem a = random_elem(f, rng), b = random_elem(f, rng);
      EXPECT_EQ((a + b).frobenius(), a.frobenius() + b.frobenius());
      Elem y = a;
      for (unsigned k = 0; k < f->degree(); ++k) y = y.frobenius();
      EXPECT_EQ(y, a);
    }
  }
}

TEST(Field, TableAndPolynomialModesAgree) {
  // F_{3^6} uses tables; recompute products by schoolbook reduction on digits
  auto f = galois_field(3, 6);
  std::mt19937_64 rng(5);
  const auto& m = f->modulus();
  for (int t = 0; t < 500; ++t) {
    Elem a = random_elem(f, rng), b = random_elem(f, rng);
    auto x = a.coeffs(), y = b.coeffs();
    std::vector<std::int64_t> r(11, 0);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) r[i + j] += static_cast<std::int64_t>(x[i] * y[j]);
    for (int k = 10; k >= 6; --k) {
      std::int64_t c = r[k] % 3;
      for (int j = 0; j <= 6; ++j) r[k - 6 + j] -= c * static_cast<std::int64_t>(m[j]);
    }
    r.resize(6);
    EXPECT_EQ(a * b, f->from_coeffs(r));
  }
}

TEST(Field, ParseIntegersAndFractions) {
  auto q = rational_field();
  EXPECT_EQ(q->parse("-7").rational(), mpq_class(-7));
  EXPECT_EQ(q->parse("6/4").rational(), mpq_class(3, 2));
  auto f = prime_field(5);
  EXPECT_EQ(f->parse("-1"), f->from_int(4));
  EXPECT_EQ(f->parse("1/2"), f->from_int(3));
  EXPECT_THROW(f->parse("abc"), std::invalid_argument);
  EXPECT_THROW(f->parse("1/5"), std::domain_error);
}

TEST(UniPoly, RootCountsMatchBruteForce) {
  std::mt19937_64 rng(7);
  for (auto& f : {prime_field(5), prime_field(7), galois_field(2, 2), galois_field(3, 2)}) {
    for (int t = 0; t < 40; ++t) {
      UniPoly g = random_poly(f, 1 + static_cast<int>(rng() % 6), rng);
      for (unsigned m = 1; m <= 3; ++m) {
        auto ext = galois_field(f->characteristic(), f->degree() * m);
        Embedding e(f, ext);
        UniPoly ge = map_poly(g, e);
        std::size_t brute = 0;
        for (auto& x : ext->elements())
          if (ge.eval(x).is_zero()) ++brute;
        EXPECT_EQ(count_roots_in_extension(g, m), brute);
        EXPECT_EQ(roots(ge).size(), brute);
      }
    }
  }
}

TEST(UniPoly, SplittingInLargeFields) {
  std::mt19937_64 rng(9);
  for (auto& f : {galois_field(2, 20), galois_field(13, 6), prime_field(1000003)}) {
    std::vector<Elem> rs;
    UniPoly g = UniPoly::constant(f->one(), f);
    for (int i = 0; i < 5; ++i) {
      Elem r = random_elem(f, rng);
      rs.push_back(r);
      g = g * (UniPoly::x(f) - UniPoly::constant(r, f));
    }
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    EXPECT_EQ(roots(g), rs);
  }
}

TEST(UniPoly, RadicalInCharacteristicP) {
  auto f = prime_field(3);
  UniPoly X = UniPoly::x(f);
  UniPoly a = X + UniPoly::constant(f->one(), f);
  UniPoly b = X * X + UniPoly::constant(f->one(), f);  // irreducible over F_3
  UniPoly p = a * a * a * b * b * X;                   // a^3 is a p-th power
  EXPECT_EQ(radical(p), (a * b * X).monic());
  EXPECT_FALSE(is_squarefree(p));
  EXPECT_TRUE(is_squarefree(a * b));
  auto q = rational_field();
  UniPoly Y = UniPoly::x(q);
  UniPoly c = Y - UniPoly::constant(q->from_int(2), q);
  EXPECT_EQ(radical(c * c * Y), (c * Y).monic());
}

TEST(UniPoly, EmbeddingIsAHomomorphism) {
  std::mt19937_64 rng(13);
  auto f4 = galois_field(2, 2);
  auto f64 = galois_field(2, 6);
  Embedding e(f4, f64);
  for (auto& a : f4->elements())
    for (auto& b : f4->elements()) {
      EXPECT_EQ(e.map(a + b), e.map(a) + e.map(b));
      EXPECT_EQ(e.map(a * b), e.map(a) * e.map(b));
      EXPECT_EQ(e.preimage(e.map(a)), a);
    }
  std::size_t in = 0;
  for (auto& y : f64->elements()) in += e.in_image(y);
  EXPECT_EQ(in, 4u);
  EXPECT_EQ(degree_over(e.map(f4->gen()), 2), 2u);
}

TEST(Matrix, RankKernelInverseDeterminant) {
  std::mt19937_64 rng(17);
  for (auto& f : {prime_field(5), galois_field(3, 2), rational_field()}) {
    for (int t = 0; t < 30; ++t) {
      std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
      Matrix m(f, r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_elem(f, rng);
      Matrix k = m.kernel();
      EXPECT_EQ(m.rank() + k.rows(), c);
      if (k.rows()) EXPECT_TRUE((m * k.transpose()).is_zero());
      if (r == c) {
        auto inv = m.inverse();
        EXPECT_EQ(inv.has_value(), !m.det().is_zero());
        if (inv) EXPECT_EQ(m * *inv, Matrix::identity(f, r));
      }
    }
  }
}

TEST(Matrix, CharpolyMatchesDeterminant) {
  std::mt19937_64 rng(19);
  auto f = prime_field(7);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 1 + rng() % 6;
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = random_elem(f, rng);
    UniPoly cp = charpoly(m, f);
    EXPECT_EQ(cp.degree(), static_cast<int>(n));
    for (auto& x : f->elements()) {
      Matrix s = Matrix::identity(f, n).scale(x) - m;
      EXPECT_EQ(cp.eval(x), s.det());
    }
    EXPECT_TRUE(eval_poly(cp, m).is_zero());
  }
}

TEST(Matrix, FastPrimeRankAgrees) {
  std::mt19937_64 rng(23);
  auto f = prime_field(31);
  for (int t = 0; t < 30; ++t) {
    std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
    Matrix m(f, r, c);
    std::vector<std::uint32_t> d(r * c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        std::uint32_t v = (rng() % 3 == 0) ? static_cast<std::uint32_t>(rng() % 31) : 0;
        m(i, j) = f->from_int(v);
        d[i * c + j] = v;
      }
    EXPECT_EQ(fp_rank(d, r, c, 31), m.rank());
  }
}

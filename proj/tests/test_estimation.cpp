#include <doctest.h>

#include <blocksdp/estimation.hpp>
#include <blocksdp/metrics.hpp>
#include <blocksdp/model.hpp>

using namespace blocksdp;

namespace {

Labels make_labels(std::initializer_list<int> values, int K) {
  Labels lab;
  lab.K = K;
  lab.values.resize(static_cast<int>(values.size()));
  int i = 0;
  for (int v : values) lab.values[i++] = v;
  return lab;
}

bool values_are(const Labels& lab, std::initializer_list<int> expect) {
  if (lab.values.size() != static_cast<int>(expect.size())) return false;
  int i = 0;
  for (int v : expect)
    if (lab.values[i++] != v) return false;
  return true;
}

}  // namespace

TEST_CASE("spectral clustering of an exact cluster matrix recovers the blocks") {
  const BlockSpec blocks = BlockSpec::balanced(3, 4);
  const Labels found = labels_from_x(blocks.cluster_matrix(), 3, 11);
  CHECK(misclassified(found, blocks.labels()) == 0);
}

TEST_CASE("spectral clustering with one class puts everyone together") {
  const Labels found = labels_from_x(Matrix::Ones(6, 6), 1, 0);
  for (int v : found.values) CHECK(v == 1);
}

TEST_CASE("spectral clustering tolerates small symmetric perturbations") {
  const BlockSpec blocks = BlockSpec::balanced(3, 20);
  Rng rng(5);
  Matrix x = blocks.cluster_matrix();
  for (int i = 0; i < x.rows(); ++i)
    for (int j = i; j < x.cols(); ++j) {
      const double noise = 0.01 * rng.uniform(-1.0, 1.0);
      x(i, j) += noise;
      if (i != j) x(j, i) += noise;
    }
  CHECK(misclassified(labels_from_x(x, 3, 3), blocks.labels()) == 0);
}

TEST_CASE("spectral clustering input validation") {
  CHECK_THROWS_AS(labels_from_x(Matrix::Zero(3, 4), 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(labels_from_x(Matrix::Zero(4, 4), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(labels_from_x(Matrix::Zero(4, 4), 5, 0), std::invalid_argument);
}

TEST_CASE("block probability estimate is exact on separated cliques") {
  const BlockSpec blocks = BlockSpec::balanced(2, 3);
  const Matrix a = blocks.cluster_matrix() - Matrix::Identity(6, 6);
  const Matrix q = estimate_q(a, blocks.labels());
  CHECK((q - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("block probability estimate inverts the conditional mean exactly") {
  const ProbabilityMatrix psi = ProbabilityMatrix::planted_partition(2, 0.7, 0.2);
  const BlockSpec blocks = BlockSpec::balanced(2, 5);
  const Matrix q = estimate_q(mean_matrix(psi, blocks), blocks.labels());
  CHECK((q - psi.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("the two denominators on a fully connected input") {
  const Labels lab = make_labels({1, 1, 1, 2, 2, 2}, 2);
  const Matrix a = Matrix::Ones(6, 6);
  const Matrix pairwise = estimate_q(a, lab, QNormalization::BlockCounts);
  CHECK((pairwise.array() - 1.0).abs().maxCoeff() <= 1e-12);

  // The verbatim normalization divides the raw block sums (self loops and
  // all) by n(n-1) on the diagonal and n^2 off it.
  const Matrix literal = estimate_q(a, lab, QNormalization::Literal);
  CHECK(literal(0, 0) == doctest::Approx(9.0 / 30.0).epsilon(1e-12));
  CHECK(literal(1, 1) == doctest::Approx(9.0 / 30.0).epsilon(1e-12));
  CHECK(literal(0, 1) == doctest::Approx(9.0 / 36.0).epsilon(1e-12));
}

TEST_CASE("singleton classes report zero within-class density") {
  const Labels lab = make_labels({1, 2, 2}, 2);
  const Matrix a = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const Matrix q = estimate_q(a, lab);
  CHECK(q(0, 0) == doctest::Approx(0.0));
  CHECK(q(1, 1) == doctest::Approx(1.0));
  CHECK(q(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("block probability estimate input validation") {
  const Labels gap = make_labels({1, 2, 2}, 3);  // class 3 never appears
  const Matrix a = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(estimate_q(a, gap, QNormalization::BlockCounts),
                  std::invalid_argument);
  CHECK_NOTHROW(estimate_q(a, gap, QNormalization::Literal));
  CHECK_THROWS_AS(estimate_q(Matrix::Zero(4, 4), make_labels({1, 2, 2}, 2)),
                  std::invalid_argument);
}

TEST_CASE("canonical ordering sorts classes by within-class density") {
  Matrix q(2, 2);
  q << 0.2, 0.5, 0.5, 0.9;
  const Canonicalized out = canonicalize(q, make_labels({1, 1, 2}, 2));
  CHECK(out.permutation == std::vector<int>{1, 0});
  CHECK(out.q(0, 0) == doctest::Approx(0.9));
  CHECK(out.q(1, 1) == doctest::Approx(0.2));
  CHECK(out.q(0, 1) == doctest::Approx(0.5));
  CHECK(values_are(out.labels, {2, 2, 1}));
}

TEST_CASE("canonical ordering breaks density ties by class size then index") {
  Matrix q(2, 2);
  q << 0.5, 0.1, 0.1, 0.5;
  const Canonicalized by_size = canonicalize(q, make_labels({1, 2, 2}, 2));
  CHECK(by_size.permutation == std::vector<int>{1, 0});
  CHECK(values_are(by_size.labels, {2, 1, 1}));

  const Canonicalized by_index = canonicalize(q, make_labels({1, 1, 2, 2}, 2));
  CHECK(by_index.permutation == std::vector<int>{0, 1});
  CHECK(values_are(by_index.labels, {1, 1, 2, 2}));
}

TEST_CASE("canonical ordering is idempotent") {
  Matrix q(3, 3);
  q << 0.3, 0.0, 0.1, 0.0, 0.8, 0.2, 0.1, 0.2, 0.5;
  const Labels lab = make_labels({1, 2, 3, 3, 2, 1, 2}, 3);
  const Canonicalized once = canonicalize(q, lab);
  const Canonicalized twice = canonicalize(once.q, once.labels);
  CHECK(twice.permutation == std::vector<int>{0, 1, 2});
  CHECK((twice.q - once.q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((twice.labels.values - once.labels.values).cwiseAbs().maxCoeff() == 0);
  // permutation[c] names the original class that became canonical class c.
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k)
      CHECK(once.q(r, k) == q(once.permutation[r], once.permutation[k]));
}

TEST_CASE("block expansion replicates entries by class membership") {
  Matrix q(2, 2);
  q << 0.9, 0.3, 0.3, 0.6;
  const Matrix m = block_expand(q, make_labels({1, 2, 1}, 2));
  Matrix expect(3, 3);
  expect << 0.9, 0.3, 0.9, 0.3, 0.6, 0.3, 0.9, 0.3, 0.9;
  CHECK((m - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(block_expand(Matrix::Zero(3, 3), make_labels({1, 2, 1}, 2)),
                  std::invalid_argument);
}

TEST_CASE("histogram pipeline on separated cliques") {
  const BlockSpec blocks = BlockSpec::balanced(2, 4);
  const Matrix a = blocks.cluster_matrix() - Matrix::Identity(8, 8);
  const HistogramEstimate h = histogram(a, blocks.cluster_matrix(), 2, 19);
  CHECK((h.Q_hat - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((h.M_hat - blocks.cluster_matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(misclassified(h.labels, blocks.labels()) == 0);
}

TEST_CASE("histogram output is canonical regardless of input label order") {
  ProbabilityMatrix psi;
  psi.values.resize(2, 2);
  psi.values << 0.9, 0.2, 0.2, 0.5;
  const BlockSpec blocks = BlockSpec::balanced(2, 4);
  const Matrix mean = mean_matrix(psi, blocks);

  Labels reversed = blocks.labels();
  for (int& v : reversed.values) v = 3 - v;
  const HistogramEstimate h = histogram_with_labels(mean, reversed);
  CHECK(h.Q_hat(0, 0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(h.Q_hat(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h.permutation == std::vector<int>{1, 0});
  CHECK((h.M_hat - mean).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(h.labels.values[0] == 1);
}

TEST_CASE("histogram estimate is equivariant under node relabeling") {
  const ProbabilityMatrix psi = ProbabilityMatrix::planted_partition(3, 0.8, 0.1);
  const BlockSpec blocks = BlockSpec::balanced(3, 6);
  const Matrix a = sample_sbm(psi, blocks, 23);
  const Labels truth = blocks.labels();
  const std::vector<int> perm = random_permutation(blocks.n(), 31);
  const auto [b, moved] = permute_graph(a, truth, perm);

  const HistogramEstimate h1 = histogram_with_labels(a, truth);
  const HistogramEstimate h2 = histogram_with_labels(b, moved);
  CHECK((h1.Q_hat - h2.Q_hat).cwiseAbs().maxCoeff() <= 1e-12);
  for (int i = 0; i < blocks.n(); ++i)
    for (int j = 0; j < blocks.n(); ++j)
      CHECK(h2.M_hat(perm[i], perm[j]) == doctest::Approx(h1.M_hat(i, j)));
}

TEST_CASE("histogram densities concentrate on a flat random graph") {
  GraphonSpec flat;
  flat.f = [](double, double) { return 0.5; };
  flat.name = "flat";
  const GraphonSample g = sample_graphon_graph(flat, 200, 7);
  const Labels halves = BlockSpec::balanced(2, 100).labels();
  const HistogramEstimate h = histogram_with_labels(g.adjacency, halves);
  CHECK((h.Q_hat.array() - 0.5).abs().maxCoeff() <= 0.05);
}

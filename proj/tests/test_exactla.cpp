#include "fmzv/exactla.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace fmzv;

namespace {

QMatrix random_matrix(std::mt19937& rng, std::size_t n, std::size_t m, int rank) {
    // product of n x rank and rank x m integer matrices
    std::uniform_int_distribution<int> dist(-5, 5);
    std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(rank)), B(rank, std::vector<mpq_class>(m));
    for (auto& r : A)
        for (auto& x : r) x = dist(rng);
    for (auto& r : B)
        for (auto& x : r) x = mpq_class(dist(rng), 1 + (rng() % 3));
    std::vector<std::vector<mpq_class>> C(n, std::vector<mpq_class>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (int k = 0; k < rank; ++k) C[i][j] += A[i][k] * B[k][j];
    return QMatrix::from_dense(C);
}

}  // namespace

TEST(ExactLA, SmallRanks) {
    std::vector<std::vector<mpq_class>> id = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    EXPECT_EQ(rank_q(QMatrix::from_dense(id)), 3u);
    std::vector<std::vector<mpq_class>> dup = {{1, mpq_class(2, 3), 5}, {2, mpq_class(4, 3), 10}};
    EXPECT_EQ(rank_q(QMatrix::from_dense(dup)), 1u);
    EXPECT_EQ(rank_q(QMatrix(4)), 0u);
}

TEST(ExactLA, Kernel) {
    auto K = kernel_q(QMatrix::from_dense({{1, 1}}));
    ASSERT_EQ(K.size(), 1u);
    EXPECT_EQ(K[0], (std::vector<mpq_class>{-1, 1}));
    auto K2 = kernel_q(QMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    EXPECT_TRUE(K2.empty());
}

TEST(ExactLA, ModularRankMatchesBareiss) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        int r = trial % 9;
        auto M = random_matrix(rng, 8, 8, r);
        auto exact = rank_bareiss(M);
        EXPECT_LE(exact, static_cast<std::size_t>(r));
        EXPECT_EQ(rank_q(M), exact);
        EXPECT_EQ(kernel_q(M).size(), 8 - exact);
    }
}

TEST(ExactLA, InvariantUnderRowOperations) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto M = random_matrix(rng, 10, 7, 1 + trial % 6);
        auto r0 = rank_q(M);
        auto N = M;
        std::shuffle(N.rows.begin(), N.rows.end(), rng);
        for (auto& row : N.rows)
            for (auto& [j, v] : row) v *= mpq_class(-3, 7);
        EXPECT_EQ(rank_q(N), r0);
    }
}

TEST(ExactLA, TwistedRank) {
    // x - t*y: at t = +1 and t = -1 both ranks are 1
    TwistedMatrix M;
    M.cols = 2;
    M.rows.push_back({{0, TwistedCoeff(1)}, {1, TwistedCoeff::twist(-1)}});
    auto r = rank_twisted(M);
    EXPECT_EQ(r.plus, 1u);
    EXPECT_EQ(r.minus, 1u);
    // (1 + t) x vanishes on the minus class
    TwistedMatrix N;
    N.cols = 1;
    N.rows.push_back({{0, TwistedCoeff(1, 1)}});
    auto s = rank_twisted(N);
    EXPECT_EQ(s.plus, 1u);
    EXPECT_EQ(s.minus, 0u);
}

TEST(ExactLA, TsvRoundTrip) {
    auto M = QMatrix::from_dense({{mpq_class(1, 2), 0}, {-3, mpq_class(5, 7)}});
    std::stringstream ss;
    write_qmatrix_tsv(ss, M);
    EXPECT_EQ(ss.str(), "1/2\t0/1\n-3/1\t5/7\n");
    auto back = read_qmatrix_tsv(ss);
    EXPECT_EQ(back.dense(), M.dense());
    std::stringstream bad("1\t2\n3\n");
    EXPECT_THROW(read_qmatrix_tsv(bad), InvalidInput);
}

#include "neghappy/goodset.hpp"

#include <random>

#include <gtest/gtest.h>

#include "neghappy/serialize.hpp"

namespace neghappy {
namespace {

FWord word_of(std::initializer_list<FStep> steps) { return FWord{steps}; }

TEST(FWords, IncrementValidates) {
  EXPECT_THROW(FStep::I(BigInt{0}), std::invalid_argument);
  EXPECT_THROW(FStep::I(BigInt{-3}), std::invalid_argument);
  EXPECT_EQ(FStep::I(BigInt{7}).m, 7);
  EXPECT_EQ(FStep::S().kind, FStep::Kind::s);
}

TEST(FWords, ApplyAndFormat) {
  const PowerParams p{2, Base{-5}};
  const FWord w = word_of({FStep::I(BigInt{1353}), FStep::S(),
                           FStep::I(BigInt{584}), FStep::S()});
  EXPECT_EQ(apply_fword(p, w, BigInt{3}), 2);
  EXPECT_EQ(apply_fword(p, w, BigInt{1}), 2);
  EXPECT_EQ(format_fword(w), "I(1353) S I(584) S");
  EXPECT_EQ(apply_fword(p, FWord{}, BigInt{5}), 5);
  EXPECT_EQ(format_fword(FWord{}), "(identity)");
  EXPECT_THROW(apply_fword(p, w, BigInt{0}), std::invalid_argument);
}

TEST(FWords, QualifyingBases) {
  EXPECT_TRUE(qualifying_base(Base{-5}));
  EXPECT_TRUE(qualifying_base(Base{-7}));
  EXPECT_TRUE(qualifying_base(Base{-11}));
  EXPECT_TRUE(qualifying_base(Base{-4}));
  EXPECT_TRUE(qualifying_base(Base{-6}));
  EXPECT_TRUE(qualifying_base(Base{-8}));
  EXPECT_TRUE(qualifying_base(Base{-10}));
  EXPECT_FALSE(qualifying_base(Base{-2}));
  EXPECT_FALSE(qualifying_base(Base{-3}));
  EXPECT_FALSE(qualifying_base(Base{-12}));
}

TEST(MergeOdd, FrozenWords) {
  const FWord w5 = merge_odd(Base{-5}, BigInt{3}, BigInt{1});
  EXPECT_EQ(w5, word_of({FStep::I(BigInt{1353}), FStep::S(),
                         FStep::I(BigInt{584}), FStep::S()}));
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w5, BigInt{3}), 2);

  const FWord w7 = merge_odd(Base{-7}, BigInt{3}, BigInt{1});
  EXPECT_EQ(w7, word_of({FStep::I(BigInt{7502}), FStep::S(),
                         FStep::I(BigInt{2313}), FStep::S()}));

  const FWord w9 = merge_odd(Base{-9}, BigInt{3}, BigInt{1});
  EXPECT_EQ(w9, word_of({FStep::I(BigInt{26899}), FStep::S(),
                         FStep::I(BigInt{6408}), FStep::S()}));
}

TEST(MergeOdd, CongruentPairNeedsOneShift) {
  // 7 = 1 (mod b-1), so a single shift aligns the nonzero digits
  const FWord w = merge_odd(Base{-5}, BigInt{7}, BigInt{1});
  EXPECT_EQ(w, word_of({FStep::I(BigInt{619}), FStep::S()}));
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w, BigInt{7}), 2);
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w, BigInt{1}), 2);

  const FWord w2 = merge_odd(Base{-5}, BigInt{26}, BigInt{2});
  EXPECT_EQ(w2, word_of({FStep::I(BigInt{603}), FStep::S()}));
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w2, BigInt{26}), 17);
}

TEST(MergeOdd, SharedDigitsMergeInOneStep) {
  // 51 and 27 both carry nonzero digits {1, 2} in base -5
  const FWord w = merge_odd(Base{-5}, BigInt{51}, BigInt{27});
  EXPECT_EQ(w, word_of({FStep::S()}));
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w, BigInt{51}), 5);
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w, BigInt{27}), 5);
}

TEST(MergeOdd, IncongruentPairTakesTwoShifts) {
  const FWord w = merge_odd(Base{-5}, BigInt{5}, BigInt{1});
  EXPECT_EQ(w, word_of({FStep::I(BigInt{728}), FStep::S(),
                        FStep::I(BigInt{582}), FStep::S()}));
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w, BigInt{5}), 5);
  EXPECT_EQ(apply_fword(PowerParams(2, Base{-5}), w, BigInt{1}), 5);
}

TEST(MergeOdd, Preconditions) {
  EXPECT_THROW(merge_odd(Base{-4}, BigInt{3}, BigInt{1}),
               std::invalid_argument);
  EXPECT_THROW(merge_odd(Base{-3}, BigInt{3}, BigInt{1}),
               std::invalid_argument);
  EXPECT_THROW(merge_odd(Base{-5}, BigInt{1}, BigInt{3}),
               std::invalid_argument);
  EXPECT_THROW(merge_odd(Base{-5}, BigInt{3}, BigInt{3}),
               std::invalid_argument);
  EXPECT_THROW(merge_odd(Base{-5}, BigInt{3}, BigInt{0}),
               std::invalid_argument);
  // parity mismatch: no F-word can ever merge these
  EXPECT_THROW(merge_odd(Base{-5}, BigInt{4}, BigInt{1}),
               std::invalid_argument);
}

TEST(MergeEven, FrozenWords) {
  const PowerParams p4{2, Base{-4}};
  const FWord w21 = merge_even(Base{-4}, BigInt{2}, BigInt{1});
  EXPECT_EQ(w21, word_of({FStep::S(), FStep::S(), FStep::S(), FStep::S(),
                          FStep::I(BigInt{1}), FStep::S(), FStep::S()}));
  EXPECT_EQ(apply_fword(p4, w21, BigInt{2}), 10);
  EXPECT_EQ(apply_fword(p4, w21, BigInt{1}), 10);

  const FWord w146 = merge_even(Base{-4}, BigInt{14}, BigInt{6});
  EXPECT_EQ(w146, word_of({FStep::I(BigInt{3}), FStep::S(), FStep::S(),
                           FStep::S(), FStep::S(), FStep::S()}));
  EXPECT_EQ(apply_fword(p4, w146, BigInt{14}), 6);

  const FWord w61 = merge_even(Base{-4}, BigInt{6}, BigInt{1});
  EXPECT_EQ(w61, word_of({FStep::I(BigInt{1}), FStep::S(), FStep::S()}));
  EXPECT_EQ(apply_fword(p4, w61, BigInt{6}), 10);
}

TEST(MergeEven, AnchoredWalk) {
  const PowerParams p6{2, Base{-6}};
  const FWord w = merge_even(Base{-6}, BigInt{2}, BigInt{1});
  EXPECT_EQ(w.steps.size(), 17u);  // I(34) S^9 I(7) S^6
  EXPECT_EQ(w.steps.front(), FStep::I(BigInt{34}));
  EXPECT_EQ(w.steps[10], FStep::I(BigInt{7}));
  const BigInt common = apply_fword(p6, w, BigInt{2});
  EXPECT_EQ(common, apply_fword(p6, w, BigInt{1}));
  EXPECT_EQ(common, 11);
}

TEST(MergeEven, Preconditions) {
  EXPECT_THROW(merge_even(Base{-5}, BigInt{3}, BigInt{1}),
               std::invalid_argument);
  EXPECT_THROW(merge_even(Base{-12}, BigInt{3}, BigInt{1}),
               std::invalid_argument);
  EXPECT_THROW(merge_even(Base{-4}, BigInt{1}, BigInt{2}),
               std::invalid_argument);
  EXPECT_THROW(merge_even(Base{-4}, BigInt{2}, BigInt{2}),
               std::invalid_argument);
  AtlasOptions opts;
  opts.search_bound = 400;
  const CycleAtlas cubic = enumerate(PowerParams(3, Base{-4}), opts);
  EXPECT_THROW(merge_even(cubic, BigInt{2}, BigInt{1}), std::invalid_argument);
}

TEST(Merge, DispatcherFollowsBaseParity) {
  const CycleAtlas a5 = enumerate(PowerParams(2, Base{-5}));
  EXPECT_EQ(merge(a5, BigInt{3}, BigInt{1}),
            merge_odd(Base{-5}, BigInt{3}, BigInt{1}));
  const CycleAtlas a4 = enumerate(PowerParams(2, Base{-4}));
  EXPECT_EQ(merge(a4, BigInt{2}, BigInt{1}),
            merge_even(Base{-4}, BigInt{2}, BigInt{1}));
}

TEST(Merge, RandomPairsReplayExactly) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(1, 2000);
  for (std::int64_t bval : {-4, -6, -8, -10, -5, -7, -9, -11}) {
    const Base b{bval};
    const PowerParams p{2, b};
    const CycleAtlas atlas = enumerate(p);
    for (int i = 0; i < 40; ++i) {
      std::int64_t t1 = dist(rng), t2 = dist(rng);
      if (b.is_odd() && (t1 - t2) % 2 != 0) ++t1;
      if (t1 == t2) t1 += b.is_odd() ? 2 : 1;
      if (t1 < t2) std::swap(t1, t2);
      const FWord w = merge(atlas, BigInt{t1}, BigInt{t2});
      EXPECT_EQ(apply_fword(p, w, BigInt{t1}), apply_fword(p, w, BigInt{t2}))
          << "base " << bval << " pair (" << t1 << ", " << t2 << ")";
    }
  }
}

TEST(OddC, FrozenValuesAndCongruence) {
  EXPECT_EQ(odd_c(Base{-5}, BigInt{2}, 2), 2);
  EXPECT_EQ(odd_c(Base{-7}, BigInt{2}, 2), 3);
  EXPECT_EQ(odd_c(Base{-9}, BigInt{2}, 2), 4);

  // independent re-derivation of the defining congruence
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> rdist(1, 4);
  for (std::int64_t bval : {-5, -7, -9, -11}) {
    const Base b{bval};
    const PowerParams p{2, b};
    const std::int64_t mag = b.magnitude();
    for (int i = 0; i < 60; ++i) {
      const std::int64_t r_prime = rdist(rng);
      std::int64_t cap = 1;  // v' must stay below b^(2r')
      for (std::int64_t j = 0; j < 2 * r_prime; ++j) cap *= mag;
      std::uniform_int_distribution<std::int64_t> vdist(
          1, std::min<std::int64_t>(40, (cap - 1) / 2));
      const BigInt v_prime{2 * vdist(rng)};
      const std::int64_t c = odd_c(b, v_prime, r_prime);
      ASSERT_GE(c, 0);
      ASSERT_LT(c, (mag + 1) / 2);
      BigInt x = v_prime - 1;
      for (std::int64_t j = 0; j < r_prime; ++j) {
        x += (mag - 1) * ipow(BigInt{bval}, 2 * j + 1);
      }
      const BigInt rhs = 4 * BigInt{r_prime} - power_sum(p, x) - 1;
      EXPECT_EQ((2 * BigInt{c} - rhs) % (mag + 1), 0)
          << "base " << bval << " v'=" << v_prime << " r'=" << r_prime;
    }
  }
}

TEST(OddC, Preconditions) {
  EXPECT_THROW(odd_c(Base{-4}, BigInt{2}, 2), std::invalid_argument);
  EXPECT_THROW(odd_c(Base{-3}, BigInt{2}, 2), std::invalid_argument);
  EXPECT_THROW(odd_c(Base{-5}, BigInt{3}, 2), std::invalid_argument);
  EXPECT_THROW(odd_c(Base{-5}, BigInt{0}, 2), std::invalid_argument);
  EXPECT_THROW(odd_c(Base{-5}, BigInt{2}, 0), std::invalid_argument);
  EXPECT_THROW(odd_c(Base{-5}, BigInt{626}, 1), std::invalid_argument);
}

TEST(Singleton, FixedPointTarget) {
  const PowerParams p{2, Base{-5}};
  const CycleAtlas atlas = enumerate(p);
  const SingletonWitness w = singleton_witness(p, atlas, BigInt{2}, 1);
  EXPECT_EQ(w.x, 1);
  EXPECT_EQ(w.r, 2);
  EXPECT_EQ(w.n, 23);
  EXPECT_EQ(w.k, 1);
  EXPECT_EQ(power_sum(p, BigInt{2 + 23}), 1);

  const SingletonWitness w1 = singleton_witness(p, atlas, BigInt{1}, 1);
  EXPECT_EQ(w1.n, 24);
}

TEST(Singleton, CycleTargetUsesPredecessor) {
  const PowerParams p{2, Base{-5}};
  const CycleAtlas atlas = enumerate(p);
  // 9 sits on the cycle (9,33,29,17); its predecessor is 17
  const SingletonWitness w = singleton_witness(p, atlas, BigInt{5}, 9);
  EXPECT_EQ(w.x, 17);
  EXPECT_EQ(w.r, 2);
  EXPECT_EQ(w.n, 420);
  EXPECT_EQ(power_sum(p, BigInt{425}), 9);
}

TEST(Singleton, GrowsTheShiftPastT) {
  const PowerParams p{2, Base{-5}};
  const CycleAtlas atlas = enumerate(p);
  const SingletonWitness w = singleton_witness(p, atlas, BigInt{1'000'000}, 1);
  EXPECT_EQ(w.r, 10);
  EXPECT_EQ(w.n, 8'765'625);  // 5^10 - 10^6
}

TEST(Singleton, Preconditions) {
  const PowerParams p{2, Base{-5}};
  const CycleAtlas atlas = enumerate(p);
  EXPECT_THROW(singleton_witness(p, atlas, BigInt{0}, 1),
               std::invalid_argument);
  EXPECT_THROW(singleton_witness(p, atlas, BigInt{2}, 7),
               std::invalid_argument);
  const CycleAtlas other = enumerate(PowerParams(2, Base{-7}));
  EXPECT_THROW(singleton_witness(p, other, BigInt{2}, 1),
               std::invalid_argument);
}

TEST(Peel, SPeelPadsToOddParity) {
  const PowerParams p{2, Base{-5}};
  const PeelOutcome out =
      peel_s(p, {BigInt{1}, BigInt{3}}, TowerNumeral::exact(BigInt{5}), 1);
  EXPECT_EQ(out.shift, 2);  // members are 1 digit; 5 is odd, so pad to 2
  EXPECT_EQ(out.k, 2);
  EXPECT_EQ(out.n,
            TowerNumeral::repunit(TowerNumeral::exact(BigInt{5}), 2));
  EXPECT_EQ(*out.n.try_value(Base{-5}), 13025);

  const PeelOutcome wide = peel_s(p, {BigInt{620}, BigInt{626}},
                                  TowerNumeral::exact(BigInt{23}), 1);
  EXPECT_EQ(wide.shift, 6);  // five digits each, 23 odd: 5 -> 6
}

TEST(Peel, SPeelSpliceIdentity) {
  // the identity that makes the peel sound: S(t + n) = S(t) + n'
  const PowerParams p{2, Base{-5}};
  const std::vector<BigInt> T{BigInt{1}, BigInt{3}};
  const TowerNumeral inner = TowerNumeral::exact(BigInt{5});
  const PeelOutcome out = peel_s(p, T, inner, 1);
  for (const BigInt& t : T) {
    EXPECT_EQ(power_sum(p, BigInt{t + *out.n.try_value(p.base)}),
              power_sum(p, t) + 5);
  }
}

TEST(Peel, IPeelTranslates) {
  const PeelOutcome out =
      peel_i(BigInt{584}, TowerNumeral::exact(BigInt{23}), 2);
  EXPECT_EQ(out.k, 2);
  EXPECT_EQ(out.n,
            TowerNumeral::offset(TowerNumeral::exact(BigInt{23}), BigInt{584}));
  EXPECT_THROW(peel_i(BigInt{0}, TowerNumeral::exact(BigInt{23}), 2),
               std::invalid_argument);
}

TEST(Peel, DispatcherMatchesDirectCalls) {
  const PowerParams p{2, Base{-5}};
  const std::vector<BigInt> T{BigInt{1}, BigInt{3}};
  const TowerNumeral inner = TowerNumeral::exact(BigInt{5});
  EXPECT_EQ(peel(p, PeelKind::s(), T, inner, 1).n, peel_s(p, T, inner, 1).n);
  EXPECT_EQ(peel(p, PeelKind::i(BigInt{9}), T, inner, 1).n,
            peel_i(BigInt{9}, inner, 1).n);
}

TEST(Peel, RejectsBadSets) {
  const PowerParams p{2, Base{-5}};
  EXPECT_THROW(peel_s(p, {}, TowerNumeral::exact(BigInt{5}), 1),
               std::invalid_argument);
  EXPECT_THROW(peel_s(p, {BigInt{0}}, TowerNumeral::exact(BigInt{5}), 1),
               std::invalid_argument);
}

TEST(GoodWitness, PairAtOddBase) {
  const PowerParams p{2, Base{-5}};
  auto [witness, cert] = good_witness(p, {BigInt{1}, BigInt{3}}, 1);
  EXPECT_EQ(witness.k, 3);
  EXPECT_EQ(witness.u, 1);
  EXPECT_EQ(witness.n.describe(),
            "(repunit((repunit(23, shift=6) + 584), shift=6) + 1353)");

  ASSERT_EQ(cert.levels.size(), 5u);
  EXPECT_EQ(cert.levels[0].set, (std::vector<BigInt>{1, 3}));
  EXPECT_EQ(cert.levels[0].step, CertStep::i_peel(BigInt{1353}));
  EXPECT_EQ(cert.levels[1].set, (std::vector<BigInt>{1354, 1356}));
  EXPECT_EQ(cert.levels[1].step, CertStep::s_peel(6));
  EXPECT_EQ(cert.levels[2].set, (std::vector<BigInt>{36, 42}));
  EXPECT_EQ(cert.levels[2].step, CertStep::i_peel(BigInt{584}));
  EXPECT_EQ(cert.levels[3].set, (std::vector<BigInt>{620, 626}));
  EXPECT_EQ(cert.levels[3].step, CertStep::s_peel(6));
  EXPECT_EQ(cert.levels[4].set, (std::vector<BigInt>{2}));
  EXPECT_EQ(cert.levels[4].step, CertStep::singleton(1, 2));
  EXPECT_EQ(cert.levels[4].n, TowerNumeral::exact(BigInt{23}));

  const VerifyReport report = verify_certificate(cert);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.levels_checked, 5);
  EXPECT_EQ(report.splices_checked, 4);
  EXPECT_EQ(report.end_to_end_checked, 2);
}

TEST(GoodWitness, TripleAtOddBase) {
  const PowerParams p{2, Base{-5}};
  auto [witness, cert] =
      good_witness(p, {BigInt{1}, BigInt{3}, BigInt{5}}, 1);
  EXPECT_EQ(witness.k, 4);
  ASSERT_EQ(cert.levels.size(), 7u);
  const VerifyReport report = verify_certificate(cert);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.splices_checked, 5);
  // the outermost repunit count no longer fits the budget, so the direct
  // replay is skipped; structure and lower splices still verify
  EXPECT_EQ(report.end_to_end_checked, 0);
  EXPECT_FALSE(witness.n.try_rle(p.base));
}

TEST(GoodWitness, PairAtEvenBase) {
  const PowerParams p{2, Base{-4}};
  auto [witness, cert] = good_witness(p, {BigInt{1}, BigInt{2}}, 1);
  ASSERT_EQ(cert.levels.size(), 8u);
  EXPECT_EQ(cert.levels.back().set, (std::vector<BigInt>{10}));
  const VerifyReport report = verify_certificate(cert);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.splices_checked, 6);
  EXPECT_EQ(report.end_to_end_checked, 0);
  EXPECT_FALSE(witness.n.try_rle(p.base));
}

TEST(GoodWitness, OtherBasesAndTargets) {
  for (std::int64_t bval : {-7, -9, -11}) {
    const PowerParams p{2, Base{bval}};
    auto [witness, cert] = good_witness(p, {BigInt{1}, BigInt{3}}, 1);
    EXPECT_TRUE(verify_certificate(cert)) << "base " << bval;
    EXPECT_GE(verify_certificate(cert).end_to_end_checked, 2) << bval;
  }
  for (std::int64_t bval : {-6, -8, -10}) {
    const PowerParams p{2, Base{bval}};
    auto [witness, cert] = good_witness(p, {BigInt{1}, BigInt{2}}, 1);
    EXPECT_TRUE(verify_certificate(cert)) << "base " << bval;
  }
  // a cycle element as the landing target
  const PowerParams p5{2, Base{-5}};
  auto [witness9, cert9] = good_witness(p5, {BigInt{1}, BigInt{3}}, 9);
  EXPECT_EQ(witness9.u, 9);
  EXPECT_EQ(cert9.target, 9);
  EXPECT_TRUE(verify_certificate(cert9));
}

TEST(GoodWitness, DeduplicatesInput) {
  const PowerParams p{2, Base{-5}};
  auto [w1, c1] = good_witness(p, {BigInt{3}, BigInt{1}, BigInt{3}}, 1);
  auto [w2, c2] = good_witness(p, {BigInt{1}, BigInt{3}}, 1);
  EXPECT_EQ(w1, w2);
  EXPECT_EQ(c1, c2);
}

TEST(GoodWitness, InputValidation) {
  const PowerParams p5{2, Base{-5}};
  EXPECT_THROW(good_witness(PowerParams(3, Base{-5}), {BigInt{1}}, 1),
               std::invalid_argument);
  EXPECT_THROW(good_witness(PowerParams(2, Base{-3}), {BigInt{1}}, 1),
               std::invalid_argument);
  EXPECT_THROW(good_witness(PowerParams(2, Base{-2}), {BigInt{1}}, 1),
               std::invalid_argument);
  EXPECT_THROW(good_witness(p5, {}, 1), std::invalid_argument);
  EXPECT_THROW(good_witness(p5, {BigInt{0}, BigInt{2}}, 1),
               std::invalid_argument);
  EXPECT_THROW(good_witness(p5, {BigInt{1}, BigInt{2}}, 1),
               std::invalid_argument);  // mixed parity at an odd base
  EXPECT_THROW(good_witness(p5, {BigInt{1}, BigInt{3}}, 7),
               std::invalid_argument);  // 7 is not periodic
}

TEST(GoodWitness, DepthBudget) {
  WitnessOptions opts;
  opts.max_levels = 2;
  EXPECT_THROW(
      good_witness(PowerParams(2, Base{-5}), {BigInt{1}, BigInt{3}}, 1, opts),
      depth_exceeded_error);
}

TEST(Verify, RejectsTamperedSetMember) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  cert.levels[0].set[1] = 5;
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, RejectsBrokenKChain) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  cert.levels[0].k += 1;
  EXPECT_FALSE(verify_certificate(cert));
  cert.levels[0].k -= 1;
  cert.levels[4].k = 0;
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, RejectsParityBreakingShift) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  cert.levels[1].step.shift += 1;
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, RejectsBadSingletonClosure) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  auto broken = cert;
  broken.levels[4].step.r = 3;  // odd shift flips the sign of b^r * x
  EXPECT_FALSE(verify_certificate(broken));
  broken = cert;
  broken.levels[4].step.r = 4;  // n no longer equals b^r * x - t
  EXPECT_FALSE(verify_certificate(broken));
  broken = cert;
  broken.levels[4].step.x = 9;  // S(9) != 1
  EXPECT_FALSE(verify_certificate(broken));
  broken = cert;
  broken.levels[4].set = {BigInt{2}, BigInt{4}};
  EXPECT_FALSE(verify_certificate(broken));
  broken = cert;
  broken.levels[4].n = TowerNumeral::exact(BigInt{24});
  EXPECT_FALSE(verify_certificate(broken));
}

TEST(Verify, RejectsTamperedOffset) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  cert.levels[2].step.m = 585;
  EXPECT_FALSE(verify_certificate(cert));
  cert.levels[2].step.m = 0;
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, RejectsWrongTarget) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  cert.target = 9;
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, RejectsReorderedLevels) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  std::swap(cert.levels[1], cert.levels[2]);
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, RejectsMalformedShapes) {
  auto [w, good] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  auto cert = good;
  cert.levels[0].set = {BigInt{3}, BigInt{1}};
  EXPECT_FALSE(verify_certificate(cert));
  cert = good;
  cert.levels[0].set.clear();
  EXPECT_FALSE(verify_certificate(cert));
  cert = good;
  cert.levels[1].step = CertStep::singleton(1, 2);  // mid-chain closure
  EXPECT_FALSE(verify_certificate(cert));
  cert = good;
  cert.levels.clear();
  EXPECT_FALSE(verify_certificate(cert));
  cert = good;
  cert.base = 5;
  EXPECT_FALSE(verify_certificate(cert));
  cert = good;
  cert.exponent = 1;
  EXPECT_FALSE(verify_certificate(cert));
  cert = good;
  cert.levels.pop_back();  // chain now ends on an S-peel
  EXPECT_FALSE(verify_certificate(cert));
}

TEST(Verify, ReportsIssuesByLevel) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  cert.levels[2].step.m = 585;
  const VerifyReport report = verify_certificate(cert);
  ASSERT_FALSE(report.issues.empty());
  EXPECT_NE(report.issues.front().find("level 2"), std::string::npos);
}

TEST(Verify, TightBudgetDegradesToStructuralChecks) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  const VerifyReport report = verify_certificate(cert, 10);
  EXPECT_TRUE(report.ok);
  EXPECT_EQ(report.splices_checked, 2);  // only the innermost repunit fits
  EXPECT_EQ(report.end_to_end_checked, 0);
}

TEST(RunWitness, OddBasePair) {
  const RunWitness rw = build_run_witness(Base{-5}, 2);
  EXPECT_EQ(rw.base, -5);
  EXPECT_EQ(rw.count, 2);
  EXPECT_EQ(rw.difference, 2);
  EXPECT_EQ(rw.witness.u, 1);
  EXPECT_EQ(rw.witness.k, 3);
  ASSERT_TRUE(rw.certificate);
  EXPECT_TRUE(verify_certificate(*rw.certificate));
  EXPECT_EQ(rw.member(0),
            TowerNumeral::offset(rw.witness.n, BigInt{1}));
  EXPECT_EQ(rw.member(1),
            TowerNumeral::offset(rw.witness.n, BigInt{3}));
  EXPECT_THROW(rw.member(-1), std::out_of_range);
  EXPECT_THROW(rw.member(2), std::out_of_range);
}

TEST(RunWitness, SingletonNeedsNoMerge) {
  const RunWitness rw = build_run_witness(Base{-5}, 1);
  EXPECT_EQ(rw.witness.k, 1);
  EXPECT_EQ(rw.witness.n, TowerNumeral::exact(BigInt{24}));
  ASSERT_TRUE(rw.certificate);
  EXPECT_EQ(rw.certificate->levels.size(), 1u);
}

TEST(RunWitness, MinusThreeIsFreeOfCharge) {
  const RunWitness rw = build_run_witness(Base{-3}, 4);
  EXPECT_EQ(rw.difference, 2);
  EXPECT_EQ(rw.witness.n, TowerNumeral::exact(BigInt{0}));
  EXPECT_EQ(rw.witness.k, 4);  // 7 -> 3 -> 5 -> 9 -> 1 is the longest
  EXPECT_FALSE(rw.certificate);
  const PowerParams p{2, Base{-3}};
  for (std::int64_t i = 0; i < 4; ++i) {
    BigInt v = *rw.member(i).try_value(p.base);
    for (std::int64_t s = 0; s < rw.witness.k; ++s) v = power_sum(p, v);
    EXPECT_EQ(v, 1);
  }
}

TEST(RunWitness, MinusTwoHasNone) {
  try {
    build_run_witness(Base{-2}, 2);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("mod 3"), std::string::npos);
  }
  EXPECT_THROW(build_run_witness(Base{-5}, 0), std::invalid_argument);
}

TEST(Serialize, CertificateRoundTrip) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  const json j(cert);
  const WitnessCertificate back = j.get<WitnessCertificate>();
  EXPECT_EQ(back, cert);
  const json jw(w);
  EXPECT_EQ(jw.get<GoodWitness>(), w);
}

TEST(Serialize, RunWitnessRoundTrip) {
  const RunWitness rw = build_run_witness(Base{-7}, 2);
  const json j(rw);
  const RunWitness back = j.get<RunWitness>();
  EXPECT_EQ(back.base, rw.base);
  EXPECT_EQ(back.count, rw.count);
  EXPECT_EQ(back.difference, rw.difference);
  EXPECT_EQ(back.witness, rw.witness);
  ASSERT_TRUE(back.certificate);
  EXPECT_EQ(*back.certificate, *rw.certificate);

  const RunWitness bare = build_run_witness(Base{-3}, 2);
  const RunWitness bare_back = json(bare).get<RunWitness>();
  EXPECT_FALSE(bare_back.certificate);
  EXPECT_EQ(bare_back.witness, bare.witness);
}

TEST(Serialize, VerifyReportShape) {
  auto [w, cert] = good_witness(PowerParams(2, Base{-5}),
                                {BigInt{1}, BigInt{3}}, 1);
  const json j(verify_certificate(cert));
  EXPECT_TRUE(j.at("ok").get<bool>());
  EXPECT_EQ(j.at("levels_checked").get<std::int64_t>(), 5);
  EXPECT_TRUE(j.at("issues").is_array());
}

}  // namespace
}  // namespace neghappy

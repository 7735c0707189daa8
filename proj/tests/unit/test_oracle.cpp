/*
 * Copyright (c) 2026, The seedgraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <thread>

#include "seedgraph/error.hpp"
#include "seedgraph/oracle.hpp"
#include "support.hpp"

using namespace seedgraph;

namespace {

Corpus labeled_pool(std::size_t n, std::uint64_t seed) {
  Corpus c = testing::random_unit_corpus(n, 3, seed);
  Corpus out(3);
  for (std::size_t i = 0; i < c.size(); ++i) {
    Record r = c.record(i);
    r.truth = (i % 3 == 0) ? Label::positive : Label::negative;
    out.append(r, c.embedding(i));
  }
  return out;
}

std::vector<std::size_t> first(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("truth oracle returns ground truth for exactly the batch") {
  const Corpus pool = testing::corpus({{"a", {1, 0}, Label::positive}, {"b", {0, 1}, Label::negative},
                                       {"c", {1, 1}, Label::positive}, {"d", {1, 2}, Label::negative}});
  const LabelBatch batch = make_batch(pool, {0, 1, 2}, 1, "b1");
  const Labels l = label_truth(batch, pool);
  CHECK(l.size() == 3);
  CHECK(l.at("a") == Label::positive);
  CHECK(l.at("b") == Label::negative);
  CHECK(l.at("c") == Label::positive);
  CHECK_FALSE(l.count("d"));
  CHECK(label_truth(batch, pool) == l);

  const Corpus unlabeled = testing::corpus({{"x", {1, 0}}});
  CHECK_THROWS_WITH_AS(label_truth(make_batch(unlabeled, {0}, 1, "b"), unlabeled), doctest::Contains("x"), OracleError);
}

TEST_CASE("noisy oracle") {
  const Corpus pool = labeled_pool(10000, 3);
  const LabelBatch batch = make_batch(pool, first(pool.size()), 1, "all");
  CHECK(label_noisy(batch, pool, 0.0, 5) == label_truth(batch, pool));
  const Labels truth = label_truth(batch, pool);
  const Labels noisy = label_noisy(batch, pool, 0.25, 5);
  std::size_t flipped = 0;
  for (const auto& [id, l] : truth) flipped += noisy.at(id) != l;
  const double rate = static_cast<double>(flipped) / 10000.0;
  // Binomial sd is about 0.0043, so 0.02 is a wide margin.
  CHECK(rate == doctest::Approx(0.25).epsilon(0.02 / 0.25));
  CHECK(label_noisy(batch, pool, 0.25, 5) == noisy);
  CHECK_THROWS_AS(label_noisy(batch, pool, 0.5, 5), InvalidArgument);
  CHECK_THROWS_AS(label_noisy(batch, pool, -0.1, 5), InvalidArgument);
}

TEST_CASE("batch queue: all-or-nothing submission") {
  const Corpus pool = labeled_pool(6, 1);
  BatchQueue q;
  const std::string id = q.enqueue(make_batch(pool, {0, 1, 2}, 1, "b1"));
  CHECK(q.pending()->batch_id == "b1");
  CHECK_THROWS(q.enqueue(make_batch(pool, {3}, 2, "b2")));

  CHECK(std::holds_alternative<SubmitUnknownBatch>(q.submit("nope", {})));
  const auto partial = q.submit(id, {{pool.id(0), Label::positive}});
  REQUIRE(std::holds_alternative<SubmitPartial>(partial));
  CHECK(std::get<SubmitPartial>(partial).missing == std::vector<std::string>{pool.id(1), pool.id(2)});
  CHECK_FALSE(q.poll(id).has_value());

  const auto stray = q.submit(id, {{pool.id(0), Label::positive}, {pool.id(1), Label::negative},
                                   {pool.id(2), Label::negative}, {pool.id(5), Label::negative}});
  CHECK(std::holds_alternative<SubmitInvalid>(stray));

  const Labels full{{pool.id(0), Label::positive}, {pool.id(1), Label::negative}, {pool.id(2), Label::negative}};
  CHECK(std::holds_alternative<SubmitOk>(q.submit(id, full)));
  CHECK(q.poll(id) == full);
  CHECK_FALSE(q.pending().has_value());
  CHECK(q.find(id)->status == BatchStatus::answered);
  CHECK(std::holds_alternative<SubmitInvalid>(q.submit(id, full)));
}

TEST_CASE("human oracle blocks until a full submission arrives") {
  const Corpus pool = labeled_pool(4, 2);
  BatchQueue q;
  HumanOracle oracle(q);
  Labels got;
  std::thread worker([&] { got = oracle.label(make_batch(pool, {0, 1}, 1, "h1")); });
  while (!q.pending()) std::this_thread::yield();
  const Labels answer{{pool.id(0), Label::negative}, {pool.id(1), Label::positive}};
  CHECK(std::holds_alternative<SubmitOk>(q.submit("h1", answer)));
  worker.join();
  CHECK(got == answer);

  std::thread waiting([&] { CHECK_THROWS_AS(oracle.label(make_batch(pool, {2}, 2, "h2")), OracleError); });
  while (!q.pending()) std::this_thread::yield();
  q.cancel();
  waiting.join();
}

TEST_CASE("answers must cover the batch exactly") {
  const Corpus pool = labeled_pool(3, 4);
  const LabelBatch b = make_batch(pool, {0, 1}, 1, "x");
  CHECK_NOTHROW(check_answer(b, {{pool.id(0), Label::positive}, {pool.id(1), Label::positive}}));
  CHECK_THROWS_AS(check_answer(b, {{pool.id(0), Label::positive}}), OracleError);
  CHECK_THROWS_AS(check_answer(b, {{pool.id(0), Label::positive}, {pool.id(1), Label::positive}, {pool.id(2), Label::negative}}),
                  OracleError);
}

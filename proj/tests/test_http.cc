// Copyright 2026 The IntentMine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <chrono>
#include <string>
#include <thread>

#include "doctest.h"
#include "intentmine/common.h"
#include "intentmine/corpus.h"
#include "intentmine/http_api.h"
#include "intentmine/service.h"
#include "json.hpp"
// After Eigen: <resolv.h>, pulled in by httplib, defines a `_res` macro.
#include "httplib.h"

using namespace intentmine;
using Json = nlohmann::json;

namespace {

// Four groups of identical texts: sizes 7, 5, 4 and 2.
std::string GroupedJsonl(bool with_labels) {
  const std::vector<std::pair<std::string, size_t>> groups = {
      {"billing invoice charge card refund", 7},
      {"weather rain forecast sunny cloud", 5},
      {"football goal match league referee", 4},
      {"pizza pasta oven cheese basil", 2}};
  std::string out;
  size_t n = 0;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (size_t i = 0; i < groups[g].second; ++i) {
      Json line = {{"id", "d" + std::to_string(n++)}, {"text", groups[g].first}};
      if (with_labels) line["label"] = "g" + std::to_string(g);
      out += line.dump() + "\n";
    }
  }
  return out;
}

class TestServer {
 public:
  TestServer() : service_(ServiceConfig{.data_dir = {}, .project = {.embed_dim = 16}}) {
    RegisterRoutes(server_, service_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }

  httplib::Client Client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  Service service_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct Reply {
  int status = 0;
  Json body;
};

Reply Decode(const httplib::Result& r) {
  REQUIRE(r);
  return {r->status, Json::parse(r->body)};
}

Reply Get(httplib::Client& c, const std::string& path) { return Decode(c.Get(path)); }

Reply Post(httplib::Client& c, const std::string& path, const std::string& body,
           const char* type = "application/json") {
  return Decode(c.Post(path, body, type));
}

Reply Post(httplib::Client& c, const std::string& path, const Json& body) {
  return Post(c, path, body.dump());
}

Json WaitJob(httplib::Client& c, const std::string& project, const std::string& job) {
  for (int i = 0; i < 2000; ++i) {
    const Reply r = Get(c, "/projects/" + project + "/jobs/" + job);
    REQUIRE(r.status == 200);
    const std::string status = r.body.at("status");
    if (status == "done" || status == "failed") return r.body;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  FAIL("job did not finish");
  return {};
}

std::string NewProject(httplib::Client& c, bool with_labels) {
  const Reply created = Post(c, "/projects", Json{{"name", "demo"}});
  REQUIRE(created.status == 200);
  const std::string id = created.body.at("project_id");
  const Reply up = Post(c, "/projects/" + id + "/corpus", GroupedJsonl(with_labels),
                        "application/x-ndjson");
  REQUIRE(up.status == 200);
  CHECK(up.body.at("n_docs") == 18);
  return id;
}

int ClusterOfSize(httplib::Client& c, const std::string& base, size_t size) {
  for (const auto& card : Get(c, base + "/clusters").body) {
    if (card.at("size") == size) return card.at("cluster_id");
  }
  return -1;
}

}  // namespace

TEST_SUITE("http") {

TEST_CASE("analyst loop over HTTP") {
  TestServer server;
  auto c = server.Client();
  const std::string id = NewProject(c, true);
  const std::string base = "/projects/" + id;

  Reply r = Get(c, base);
  CHECK(r.status == 200);
  CHECK(r.body.at("n_docs") == 18);
  CHECK(r.body.at("name") == "demo");
  CHECK(r.body.at("has_reference_labels") == true);

  // No partition yet.
  r = Get(c, base + "/clusters");
  CHECK(r.status == 200);
  CHECK(r.body.empty());
  CHECK(Get(c, base + "/metrics").status == 409);
  CHECK(Post(c, base + "/labels", Json{{"cluster_id", 0}, {"label", "x"}}).status == 409);

  r = Post(c, base + "/jobs", Json{{"mode", "fixed_k"}, {"k", 4}, {"seed", 1}});
  REQUIRE(r.status == 200);
  const std::string job = r.body.at("job_id");
  const Json record = WaitJob(c, id, job);
  CHECK(record.at("status") == "done");
  CHECK(record.at("n_clusters") == 4);
  CHECK(record.at("request").at("k") == 4);
  CHECK(record.contains("timings"));
  CHECK(record.at("partition_digest").is_string());

  r = Get(c, base + "/clusters?max=2&top_bigrams=2");
  REQUIRE(r.status == 200);
  REQUIRE(r.body.size() == 2);
  CHECK(r.body[0].at("size") == 7);
  CHECK(r.body[0].at("top_bigrams").size() == 2);
  CHECK(r.body[0].at("top_bigrams")[0].at("bigram") == "billing invoice");
  CHECK(r.body[0].at("top_bigrams")[0].at("count") == 7);
  CHECK(Get(c, base + "/clusters?top_bigrams=0").status == 400);
  CHECK(Get(c, base + "/clusters?max=two").status == 400);

  const int seven = ClusterOfSize(c, base, 7);
  const std::string docs = base + "/clusters/" + std::to_string(seven) + "/docs";
  r = Get(c, docs + "?offset=2&limit=3");
  REQUIRE(r.status == 200);
  CHECK(r.body.at("total") == 7);
  CHECK(r.body.at("offset") == 2);
  CHECK(r.body.at("docs").size() == 3);
  CHECK(r.body.at("docs")[0].at("text") == "billing invoice charge card refund");
  CHECK(r.body.at("docs")[0].at("label").is_null());
  CHECK(Get(c, docs).body.at("docs").size() == 7);
  CHECK(Get(c, base + "/clusters/99/docs").status == 404);

  r = Post(c, base + "/labels", Json{{"cluster_id", seven}, {"label", "billing"}});
  REQUIRE(r.status == 200);
  CHECK(r.body.at("labeled_count") == 7);
  const uint64_t rev = r.body.at("revision");
  r = Post(c, base + "/labels", Json{{"doc_ids", {"d7", "d8"}}, {"label", "weather"}});
  CHECK(r.body.at("labeled_count") == 2);
  CHECK(r.body.at("revision") == rev + 1);
  CHECK(Get(c, docs).body.at("docs")[0].at("label") == "billing");

  r = Get(c, base + "/labels");
  CHECK(r.body.at("labels").size() == 9);
  CHECK(r.body.at("labels").at("d7") == "weather");
  CHECK(r.body.at("revision") == rev + 1);

  r = Get(c, base + "/metrics");
  REQUIRE(r.status == 200);
  CHECK(r.body.at("purity") == 1.0);
  CHECK(r.body.at("n_true_classes") == 4);

  r = Post(c, base + "/clusters/" + std::to_string(seven) + "/subcluster",
           Json{{"mode", "fixed_k"}, {"k", 2}});
  REQUIRE(r.status == 200);
  CHECK(WaitJob(c, id, r.body.at("job_id")).at("parent_cluster") == seven);
  r = Get(c, base + "/clusters?parent=" + std::to_string(seven));
  REQUIRE(r.status == 200);
  size_t total = 0;
  for (const auto& card : r.body) total += card.at("size").get<size_t>();
  CHECK(total == 7);
  CHECK(Get(c, base + "/clusters?parent=" + std::to_string(ClusterOfSize(c, base, 5))).status ==
        404);

  r = Post(c, base + "/adapt", Json{{"epochs", 20}, {"projection_dim", 8}});
  REQUIRE(r.status == 200);
  CHECK(r.body.at("adapter_stats").at("trained_on") == 9);
  CHECK(r.body.at("adapter_stats").at("output_dim") == 8);
  CHECK(Get(c, base).body.at("has_adapter") == true);

  r = Post(c, base + "/jobs", Json{{"mode", "auto"}});
  CHECK(WaitJob(c, id, r.body.at("job_id")).at("adapted") == true);
}

TEST_CASE("error codes") {
  TestServer server;
  auto c = server.Client();
  CHECK(Get(c, "/projects/p42").status == 404);
  CHECK(Post(c, "/projects/p42/jobs", Json::object()).status == 404);

  const std::string id = NewProject(c, false);
  const std::string base = "/projects/" + id;
  CHECK(Get(c, base + "/metrics").status == 404);
  CHECK(Get(c, base + "/jobs/j9").status == 404);

  Reply r = Post(c, base + "/corpus", std::string("{\"id\": \"a\"}\nnot json\n"), "text/plain");
  CHECK(r.status == 400);
  CHECK(r.body.at("error").get<std::string>().find("line 1") != std::string::npos);
  CHECK(Get(c, base).body.at("n_docs") == 18);

  CHECK(Post(c, base + "/jobs", std::string("{"), "application/json").status == 400);
  CHECK(Post(c, base + "/jobs", std::string("[1]"), "application/json").status == 400);
  CHECK(Post(c, base + "/jobs", Json{{"mode", "fixed_k"}, {"k", 0}}).status == 400);
  CHECK(Post(c, base + "/jobs", Json{{"mode", "fixed_k"}, {"k", 19}}).status == 400);
  CHECK(Post(c, base + "/jobs", Json{{"mode", "magic"}}).status == 400);
  CHECK(Post(c, base + "/jobs", Json{{"scope", {"d0"}}}).status == 400);
  r = Post(c, base + "/jobs", Json{{"scope", {"d0", "nobody"}}});
  CHECK(r.status == 400);
  CHECK(r.body.at("error").get<std::string>().find("nobody") != std::string::npos);

  r = Post(c, base + "/jobs", Json{{"mode", "fixed_k"}, {"k", 4}, {"seed", 1}});
  WaitJob(c, id, r.body.at("job_id"));

  CHECK(Post(c, base + "/labels", Json{{"label", "x"}}).status == 400);
  CHECK(Post(c, base + "/labels", Json{{"cluster_id", 0}, {"doc_ids", {"d0"}}, {"label", "x"}})
            .status == 400);
  CHECK(Post(c, base + "/labels", Json{{"cluster_id", 0}, {"label", "  "}}).status == 400);
  CHECK(Post(c, base + "/labels", Json{{"cluster_id", 0}}).status == 400);
  CHECK(Post(c, base + "/labels", Json{{"cluster_id", 11}, {"label", "x"}}).status == 404);
  CHECK(Post(c, base + "/labels", Json{{"doc_ids", {"zz"}}, {"label", "x"}}).status == 400);
  CHECK(Get(c, base + "/labels").body.at("revision") == 0);

  CHECK(Post(c, base + "/clusters/0/subcluster", Json{{"scope", {"d0", "d1"}}}).status == 400);
  CHECK(Post(c, base + "/clusters/77/subcluster", Json::object()).status == 404);

  r = Post(c, base + "/adapt", Json::object());
  CHECK(r.status == 400);
  CHECK(r.body.at("error").get<std::string>().find("below the threshold") != std::string::npos);
  CHECK(Post(c, base + "/adapt", Json{{"learning_rate", -1}}).status == 400);
  CHECK(Post(c, base + "/adapt", Json{{"epochs", "many"}}).status == 400);
}

TEST_CASE("train config from json") {
  const TrainConfig cfg = TrainConfigFromJson({{"epochs", 3}, {"batch_size", 4}});
  CHECK(cfg.epochs == 3);
  CHECK(cfg.batch_size == 4);
  CHECK(cfg.learning_rate == 0.5);
  CHECK_THROWS_AS(TrainConfigFromJson({{"batch_size", 0}}), ValidationError);
  CHECK_THROWS_AS(TrainConfigFromJson(Json::array()), ValidationError);
}

}  // TEST_SUITE

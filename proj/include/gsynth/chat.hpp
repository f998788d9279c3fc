#pragma once

#include <fstream>
#include <memory>
#include <thread>

#include <json.hpp>

#include "gsynth/errors.hpp"

namespace gsynth {

struct Message {
  std::string role; // system | user | assistant
  std::string content;
};

/// Append-only message history for one solve.
struct Conversation {
  std::vector<Message> messages;

  void append(std::string role, std::string content) {
    messages.push_back({std::move(role), std::move(content)});
  }
  size_t size() const { return messages.size(); }
};

struct BackendConfig {
  enum Kind { Mock, Remote } kind = Mock;
  std::string model = "gpt-3.5-turbo";
  double temperature = 1.0;
  double request_timeout_s = 30.0;
  int max_retries = 3;
  std::string script_path;   // mock: line-delimited replies
  std::string endpoint;      // remote: chat-completion URL
  std::string token_env = "LLM_API_KEY";
  std::string transcript_path;

  void validate() const {
    if (temperature < 0.0 || temperature > 2.0)
      throw Error("temperature must be in [0,2]");
    if (kind == Mock && script_path.empty())
      throw Error("mock backend needs a script path");
    if (kind == Remote && endpoint.empty())
      throw Error("remote backend needs an endpoint");
  }
};

/// A chat completion backend. One blocking request at a time.
class Backend {
public:
  virtual ~Backend() = default;
  virtual std::string complete(const Conversation &conv) = 0;
  virtual const BackendConfig &config() const = 0;
};

/// Scripted backend for offline runs: replays canned responses in
/// order. Script format: one JSON object per line with a "content"
/// field; {"error": "rate_limited"} and {"error": "unavailable"} lines
/// simulate transport failures.
class MockBackend : public Backend {
public:
  explicit MockBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    std::ifstream in(cfg_.script_path);
    if (!in)
      throw Error("cannot open mock script " + cfg_.script_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded())
        throw Error("mock script " + cfg_.script_path + ": bad JSON on line " +
                    std::to_string(lineno));
      replies_.push_back(std::move(j));
    }
  }

  std::string complete(const Conversation &) override {
    if (next_ >= replies_.size())
      throw ScriptExhausted("mock script " + cfg_.script_path + " ran out of replies (" +
                            std::to_string(replies_.size()) + " consumed)");
    const nlohmann::json &j = replies_[next_++];
    if (j.contains("error")) {
      std::string kind = j["error"].get<std::string>();
      if (kind == "rate_limited")
        throw RateLimited("mock backend: rate limited");
      throw BackendUnavailable("mock backend: " + kind);
    }
    return j.at("content").get<std::string>();
  }

  const BackendConfig &config() const override { return cfg_; }

private:
  BackendConfig cfg_;
  std::vector<nlohmann::json> replies_;
  size_t next_ = 0;
};

namespace detail {

struct ParsedUrl {
  std::string scheme_host; // e.g. http://127.0.0.1:8080
  std::string path;        // e.g. /v1/chat/completions
};

inline ParsedUrl parse_url(const std::string &url) {
  size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw Error("endpoint must be an http(s) URL: " + url);
  size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos)
    return {url, "/"};
  return {url.substr(0, path), url.substr(path)};
}

} // namespace detail

} // namespace gsynth

// The HTTP transport lives in a separate header so the many translation
// units that only need the Backend interface skip compiling httplib.

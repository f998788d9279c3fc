#pragma once

#include <cstdlib>

#include <httplib.h>

#include "gsynth/chat.hpp"

namespace gsynth {

/// Chat-completion client: POSTs {model, temperature, messages} to the
/// configured endpoint, bearer token from the environment. Retries with
/// exponential backoff on transient failures.
class HttpBackend : public Backend {
public:
  explicit HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    url_ = detail::parse_url(cfg_.endpoint);
  }

  std::string complete(const Conversation &conv) override {
    nlohmann::json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    body["messages"] = nlohmann::json::array();
    for (const Message &m : conv.messages)
      body["messages"].push_back({{"role", m.role}, {"content", m.content}});

    httplib::Headers headers;
    if (const char *token = std::getenv(cfg_.token_env.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + token);

    std::string payload = body.dump();
    double backoff_s = 0.25;
    bool rate_limited = false;
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(backoff_s));
        backoff_s *= 2.0;
      }
      httplib::Client client(url_.scheme_host);
      int timeout_s = std::max(1, static_cast<int>(cfg_.request_timeout_s));
      if (cfg_.request_timeout_s <= 0.0) {
        // A zero timeout is an immediate failure, kept for tests.
        last_error = "request timeout is zero";
        continue;
      }
      client.set_connection_timeout(timeout_s, 0);
      client.set_read_timeout(timeout_s, 0);
      client.set_write_timeout(timeout_s, 0);
      httplib::Result res = client.Post(url_.path, headers, payload, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429) {
        rate_limited = true;
        last_error = "HTTP 429";
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw BackendUnavailable("backend returned HTTP " + std::to_string(res->status) +
                                 ": " + res->body.substr(0, 200));
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty())
        throw BackendUnavailable("malformed completion response: " + res->body.substr(0, 200));
      const nlohmann::json &choice = reply["choices"][0];
      if (choice.contains("message") && choice["message"].contains("content"))
        return choice["message"]["content"].get<std::string>();
      if (choice.contains("text"))
        return choice["text"].get<std::string>();
      throw BackendUnavailable("completion response has no assistant message");
    }
    if (rate_limited)
      throw RateLimited("backend rate limited after " + std::to_string(cfg_.max_retries + 1) +
                        " attempts");
    throw BackendUnavailable("backend unreachable after " +
                             std::to_string(cfg_.max_retries + 1) + " attempts (" +
                             last_error + ")");
  }

  const BackendConfig &config() const override { return cfg_; }

private:
  BackendConfig cfg_;
  detail::ParsedUrl url_;
};

/// Sends one user message: appends it, gets the assistant reply, and
/// appends that too. Optionally mirrors both to a transcript file.
inline std::string query(Backend &backend, Conversation &conv, const std::string &user_text) {
  conv.append("user", user_text);
  std::string reply;
  try {
    reply = backend.complete(conv);
  } catch (...) {
    conv.messages.pop_back(); // failed sends leave no trace in the history
    throw;
  }
  conv.append("assistant", reply);
  const std::string &path = backend.config().transcript_path;
  if (!path.empty()) {
    std::ofstream out(path, std::ios::app);
    out << "=== user ===\n" << user_text << "\n=== assistant ===\n" << reply << "\n";
  }
  return reply;
}

} // namespace gsynth

#include <cstdlib>

#include <httplib.h>

#include "lawsim/llm_disputes.hpp"

namespace lawsim {

ReplayFileProvider::ReplayFileProvider(const std::filesystem::path& replies_path) {
  if (!std::filesystem::exists(replies_path))
    throw ProviderError("replay file not found: " + replies_path.string());
  for (const json& record : read_jsonl(replies_path)) {
    replies_[record.at("prompt_hash").get<std::string>()] =
        record.at("reply").get<std::string>();
  }
}

std::string ReplayFileProvider::complete(const std::string& prompt, double /*temperature*/) {
  auto it = replies_.find(to_hex64(fnv1a64(prompt)));
  if (it == replies_.end())
    throw ProviderError("no canned reply for prompt hash " + to_hex64(fnv1a64(prompt)));
  return it->second;
}

HttpChatProvider::HttpChatProvider(std::string endpoint, std::string model_id,
                                   std::string api_key_env)
    : endpoint_(std::move(endpoint)),
      model_id_(std::move(model_id)),
      api_key_env_(std::move(api_key_env)) {}

std::string HttpChatProvider::complete(const std::string& prompt, double temperature) {
  std::size_t scheme_end = endpoint_.find("://");
  if (scheme_end == std::string::npos)
    throw ProviderError("endpoint must include a scheme: " + endpoint_);
  std::size_t host_begin = scheme_end + 3;
  std::size_t path_begin = endpoint_.find('/', host_begin);
  std::string origin = endpoint_.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "/" : endpoint_.substr(path_begin);

  const char* key = nullptr;
  if (!api_key_env_.empty()) {
    key = std::getenv(api_key_env_.c_str());
    if (key == nullptr)
      throw ProviderError("environment variable not set: " + api_key_env_);
  }

  json body = {{"model", model_id_},
               {"temperature", temperature},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};

  httplib::Client client(origin);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (key != nullptr) headers.emplace("Authorization", std::string("Bearer ") + key);

  auto response = client.Post(path, headers, body.dump(), "application/json");
  if (!response) throw ProviderError("request to " + endpoint_ + " failed");
  if (response->status != 200)
    throw ProviderError("chat endpoint returned status " + std::to_string(response->status));
  try {
    json parsed = json::parse(response->body);
    return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("unexpected chat response shape: ") + e.what());
  }
}

}  // namespace lawsim

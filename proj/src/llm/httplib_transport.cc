// Copyright 2026 The RoP Toolkit Authors
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cctype>

#include "rop/llm/http_backend.h"

namespace rop::llm {
namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url,
                    const std::map<std::string, std::string>& headers,
                    const std::string& body,
                    std::chrono::milliseconds timeout) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw TransportError("endpoint '" + url + "' has no scheme");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers hdrs;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        hdrs.emplace(k, v);
      }
    }
    auto result = client.Post(path, hdrs, body, content_type);
    if (!result) {
      throw TransportError("POST " + url + ": " + httplib::to_string(result.error()));
    }
    HttpResponse resp;
    resp.status = result->status;
    resp.body = result->body;
    for (const auto& [k, v] : result->headers) {
      std::string key = k;
      for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      resp.headers[key] = v;
    }
    return resp;
  }
};

}  // namespace

std::shared_ptr<HttpTransport> make_httplib_transport() {
  return std::make_shared<HttplibTransport>();
}

}  // namespace rop::llm

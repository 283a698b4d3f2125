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

#include <array>
#include <cctype>
#include <string>

#include "rop/core/errors.h"
#include "rop/core/random.h"
#include "rop/core/text.h"
#include "rop/core/utf8.h"
#include "rop/perturb/perturb.h"
#include "rop/perturb/tokenize.h"

namespace rop::perturb {
namespace {

// {a}, {b} and {c} are replaced by seeded integers.
constexpr std::array<std::string_view, 10> kDistractors = {
    "{a} years ago, a neighbor bought a clock that cost ${b}, and plans to "
    "replace it in {c} years.",
    "The local library has {a} shelves, and {b} of them were repainted last "
    "spring.",
    "A bakery down the street sells about {a} loaves of bread every {b} days.",
    "Last year, a cousin ran {a} miles in a charity race that raised ${b}.",
    "The school bus stops at {a} houses and needs about {b} minutes to finish "
    "its route.",
    "A nearby park planted {a} new trees, each about {b} feet tall.",
    "On weekends the town market has {a} stalls, and {b} of them sell fruit.",
    "A friend has collected {a} stamps over the past {b} years.",
    "The community pool was built {a} years ago and holds {b} swimmers.",
    "A local museum received {a} visitors on a rainy day {b} weeks ago.",
};

std::string fill(std::string_view tmpl, int a, int b, int c) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl.compare(i, 3, "{a}") == 0) {
      out += std::to_string(a), i += 2;
    } else if (tmpl.compare(i, 3, "{b}") == 0) {
      out += std::to_string(b), i += 2;
    } else if (tmpl.compare(i, 3, "{c}") == 0) {
      out += std::to_string(c), i += 2;
    } else {
      out.push_back(tmpl[i]);
    }
  }
  return out;
}

std::string strip_quotes(std::string s) {
  s = core::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = core::trim(s.substr(1, s.size() - 2));
  }
  return s;
}

// The text a model appended after the original question, or nullopt when the
// reply does not start with the (whitespace-normalized) original.
std::optional<std::string> appended_tail(std::string_view original,
                                         std::string_view reply) {
  const std::string norm_original = core::collapse_whitespace(original);
  const std::string norm_reply = core::collapse_whitespace(strip_quotes(std::string(reply)));
  if (norm_reply.compare(0, norm_original.size(), norm_original) != 0) {
    return std::nullopt;
  }
  if (norm_reply.size() <= norm_original.size() + 1) return std::nullopt;
  // The original's last word must not continue into the reply.
  const char next = norm_reply[norm_original.size()];
  const char last = norm_original.empty() ? ' ' : norm_original.back();
  if (next != ' ' && std::isalnum(static_cast<unsigned char>(last))) {
    return std::nullopt;
  }
  std::string tail = core::trim(norm_reply.substr(norm_original.size()));
  bool has_letter = false;
  for (char32_t c : core::utf8::decode(tail)) has_letter |= is_letter(c);
  if (!has_letter) return std::nullopt;
  return tail;
}

PerturbationBody append(std::string_view text, const std::string& tail) {
  const std::size_t n = core::utf8::length(text);
  const bool needs_space = !text.empty() && !core::trim(text.substr(text.size() - 1)).empty();
  std::string after = (needs_space ? " " : "") + tail;
  Edit edit{n, n, "", after, PerturbationType::kUIC};
  return {std::string(text) + after, {edit}};
}

}  // namespace

PerturbationBody uic_fallback(std::string_view text, std::uint64_t seed) {
  core::Rng rng(core::derive_seed(seed, {"UIC"}));
  std::string_view tmpl = kDistractors[rng.uniform(kDistractors.size())];
  int a = 2 + static_cast<int>(rng.uniform(48));
  int b = 2 + static_cast<int>(rng.uniform(98));
  int c = 2 + static_cast<int>(rng.uniform(10));
  return append(text, fill(tmpl, a, b, c));
}

PerturbationBody perturb_uic(const core::Question& question,
                             llm::ChatBackend* backend,
                             std::string_view rewrite_template,
                             std::uint64_t seed, const UicOptions& opts) {
  if (backend) {
    llm::ChatRequest req;
    req.messages.push_back(
        {llm::Role::kUser,
         core::render_template(
             rewrite_template,
             {{"type", "UIC"},
              {"type_description", std::string(describe(PerturbationType::kUIC))},
              {"question", question.text},
              {"answer", question.answer.value}})});
    req.temperature = opts.temperature;
    req.max_tokens = opts.max_tokens;
    req = llm::resolve_model(req, *backend);
    std::string last_problem = "no attempts made";
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
      llm::Completion completion;
      try {
        completion = backend->complete(req);
      } catch (const BackendError& e) {
        if (!opts.allow_fallback) {
          throw BackendError(std::string("UIC: backend failed: ") + e.what());
        }
        last_problem = e.what();
        break;
      }
      if (auto tail = appended_tail(question.text, completion.text)) {
        return append(question.text, *tail);
      }
      last_problem = "reply did not keep the original question as its prefix";
    }
    if (!opts.allow_fallback) {
      throw PerturbationError("UIC: " + last_problem);
    }
  }
  return uic_fallback(question.text, seed);
}

}  // namespace rop::perturb

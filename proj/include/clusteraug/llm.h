// Copyright 2026 The clusteraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLUSTERAUG_LLM_H_
#define CLUSTERAUG_LLM_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clusteraug/augment.h"
#include "clusteraug/corpus.h"

namespace clusteraug {

// --- Prompts -------------------------------------------------------------

struct AugExample {
  std::string original;
  std::string augmented;
};

struct NerExample {
  std::vector<std::string> tokens;
  std::vector<std::string> labels;
};

// Entity-replacement prompt: instruction, numbered ORIGINAL/AUGMENTED
// example pairs, then the input awaiting its AUGMENTED TEXT. Throws on zero
// examples or blank input.
std::string BuildAugPrompt(std::string_view language,
                           std::span<const AugExample> examples,
                           std::string_view input_text);

// Few-shot tagging prompt with INPUT/OUTPUT example pairs. Throws when an
// example's label count differs from its token count.
std::string BuildFewShotNerPrompt(std::string_view language,
                                  std::span<const NerExample> examples,
                                  std::span<const std::string> tokens);

// First maximal run of whitespace-separated labels (surrounding punctuation
// ignored) whose length is exactly `n_tokens`. Throws kContract if there is
// none.
std::vector<std::string> ParseLabelSequence(
    std::string_view response, std::size_t n_tokens,
    std::span<const std::string> valid_labels);

// Tokens after the last "AUGMENTED TEXT" marker, or of the whole response
// when the marker is absent. Throws kContract on an empty result.
std::vector<std::string> ParseAugmentedText(std::string_view response);

// Example pairs drawn from a training corpus, covering each entity type when
// possible. Augmented sides come from random same-type replacement.
std::vector<AugExample> DefaultAugExamples(const Corpus& train,
                                           std::size_t count,
                                           std::uint64_t seed);
std::vector<NerExample> DefaultNerExamples(const Corpus& train,
                                           std::size_t count);

// --- Chat-completion transport ------------------------------------------

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct ChatExchange {
  std::vector<ChatMessage> messages;
  std::string response;
  std::string usage;  // raw JSON of the "usage" object, if any
};

enum class ReplayMode { kOff, kRecord, kReplay };

struct LlmConfig {
  std::string endpoint;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  double temperature = 0.0;
  int max_tokens = 512;
  std::string credential_env = "LLM_API_KEY";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  ReplayMode replay_mode = ReplayMode::kOff;
  std::string replay_log;
  std::size_t max_in_flight = 4;
};

// Sends message lists to a chat-completion style HTTP endpoint. Transient
// failures (connection errors, 429, 5xx) are retried with exponential
// backoff. Thread-safe.
class ChatClient {
 public:
  explicit ChatClient(LlmConfig config);

  // Fills exchange.response and returns it.
  std::string Complete(ChatExchange& exchange);

  const LlmConfig& config() const { return config_; }

 private:
  std::string RequestBody(const ChatExchange& exchange) const;
  std::string Send(const std::string& body, ChatExchange& exchange);

  LlmConfig config_;
  std::mutex replay_mu_;
  std::map<std::string, std::string> replay_;
};

std::string ChatComplete(const LlmConfig& config, ChatExchange& exchange);

// The model call used by the pipelines; tests substitute deterministic
// mocks.
using ChatBackend = std::function<std::string(ChatExchange&)>;

ChatBackend MakeChatBackend(std::shared_ptr<ChatClient> client);

// --- Pipelines ----------------------------------------------------------

// Labels for `generated` obtained by anchoring on the source's non-entity
// tokens: the source must appear as F0 M1 F1 ... Mm Fm with fillers Fi kept
// verbatim, and each mention Mi replaced by a non-empty span. Among several
// decompositions the one with the shortest leading spans wins. nullopt when
// no decomposition exists.
std::optional<std::vector<Label>> AlignGenerated(
    const TaggedSentence& source, std::span<const std::string> generated);

struct GenerativeOptions {
  std::string language = "Urdu";
  std::vector<AugExample> examples;
  std::size_t max_in_flight = 4;
};

AugmentResult GenerativeAugment(const Corpus& corpus, const ChatBackend& chat,
                                const GenerativeOptions& options);

struct FewShotOptions {
  std::string language = "Urdu";
  std::vector<NerExample> examples;
  std::size_t max_in_flight = 4;
};

struct FewShotResult {
  Corpus predictions;
  // Sentences whose output could not be repaired are tagged all-O.
  std::vector<ProvenanceEvent> events;
  std::size_t transport_failures = 0;
};

FewShotResult FewShotNer(const Corpus& corpus, const ChatBackend& chat,
                         const FewShotOptions& options);

}  // namespace clusteraug

#endif  // CLUSTERAUG_LLM_H_

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

#include "clusteraug/llm.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>
#include <utility>

#include "clusteraug/error.h"
#include "httplib.h"
#include "json.hpp"

namespace clusteraug {

namespace {

using nlohmann::json;

constexpr std::string_view kAugMarker = "AUGMENTED TEXT";

std::string CountWord(std::size_t n) {
  static const char* const kWords[] = {"Zero", "One", "Two",   "Three",
                                       "Four", "Five", "Six",  "Seven",
                                       "Eight", "Nine", "Ten"};
  return n <= 10 ? kWords[n] : std::to_string(n);
}

std::string ExamplesPhrase(std::size_t n, const char* verb) {
  return CountWord(n) + (n == 1 ? " example is " : " examples are ") + verb +
         " for your reference:";
}

bool IsEdgePunct(char c) {
  static constexpr std::string_view kPunct = ".,;:!?\"'`()[]{}*";
  return kPunct.find(c) != std::string_view::npos;
}

std::string StripEdgePunct(std::string_view token) {
  while (!token.empty() && IsEdgePunct(token.front())) token.remove_prefix(1);
  while (!token.empty() && IsEdgePunct(token.back())) token.remove_suffix(1);
  return std::string(token);
}

[[noreturn]] void ThrowParse(const std::string& message) {
  throw Error(ErrorKind::kContract, message);
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are the
// callee's responsibility.
void ForEachConcurrently(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

std::vector<std::size_t> CoveringSentences(const Corpus& train,
                                           std::size_t count) {
  std::vector<std::size_t> chosen;
  std::set<std::size_t> taken;
  for (EntityType type : kEntityTypes) {
    if (chosen.size() >= count) break;
    for (std::size_t s = 0; s < train.sentences.size(); ++s) {
      if (taken.count(s)) continue;
      const auto& labels = train.sentences[s].labels;
      bool has = std::any_of(labels.begin(), labels.end(), [&](Label l) {
        return !l.IsOutside() && l.type == type;
      });
      if (has) {
        chosen.push_back(s);
        taken.insert(s);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < train.sentences.size() && chosen.size() < count;
       ++s) {
    if (taken.count(s)) continue;
    const auto& labels = train.sentences[s].labels;
    if (std::any_of(labels.begin(), labels.end(),
                    [](Label l) { return !l.IsOutside(); })) {
      chosen.push_back(s);
      taken.insert(s);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

bool IsTransient(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string BuildAugPrompt(std::string_view language,
                           std::span<const AugExample> examples,
                           std::string_view input_text) {
  if (examples.empty()) ThrowInvalid("augmentation prompt needs an example");
  if (SplitWhitespace(input_text).empty()) {
    ThrowInvalid("augmentation prompt: empty input text");
  }
  std::string out;
  out += "You are an expert in augmenting data for named entities for ";
  out += language;
  out +=
      " language. The input contains the ORIGINAL TEXT followed by the "
      "AUGMENTED TEXT. Perform augmentation by replacing named entities with "
      "new entities of the same type and return the AUGMENTED TEXT. ";
  out += ExamplesPhrase(examples.size(), "given");
  out += '\n';
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out += "EXAMPLE " + std::to_string(i + 1) + ":\n";
    out += "ORIGINAL TEXT: " + examples[i].original + "\n";
    out += "AUGMENTED TEXT: " + examples[i].augmented + "\n";
  }
  out += "ORIGINAL TEXT: ";
  out += input_text;
  out += "\nAUGMENTED TEXT:";
  return out;
}

std::string BuildFewShotNerPrompt(std::string_view language,
                                  std::span<const NerExample> examples,
                                  std::span<const std::string> tokens) {
  if (examples.empty()) ThrowInvalid("few-shot prompt needs an example");
  if (tokens.empty()) ThrowInvalid("few-shot prompt: empty input");
  std::string out;
  out += "You are an expert in identifying named entities for ";
  out += language;
  out +=
      ". The INPUT contains text followed by an OUTPUT sequence of BIO "
      "labels. Perform named entity recognition and return the labels. ";
  out += ExamplesPhrase(examples.size(), "provided");
  out += '\n';
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const NerExample& ex = examples[i];
    if (ex.tokens.size() != ex.labels.size()) {
      ThrowInvalid("few-shot example " + std::to_string(i + 1) + " has " +
                   std::to_string(ex.tokens.size()) + " tokens but " +
                   std::to_string(ex.labels.size()) + " labels");
    }
    out += "EXAMPLE " + std::to_string(i + 1) + ":\n";
    out += "INPUT: " + JoinTokens(ex.tokens) + "\n";
    out += "OUTPUT: " + JoinTokens(ex.labels) + "\n";
  }
  out += "INPUT: " + JoinTokens(tokens) + "\nOUTPUT:";
  return out;
}

std::vector<std::string> ParseLabelSequence(
    std::string_view response, std::size_t n_tokens,
    std::span<const std::string> valid_labels) {
  if (n_tokens == 0) ThrowInvalid("label parsing needs n_tokens >= 1");
  const std::vector<std::string> words = SplitWhitespace(response);
  if (words.empty()) ThrowParse("empty model response");
  const std::set<std::string> valid(valid_labels.begin(), valid_labels.end());
  std::vector<std::string> run;
  for (std::size_t i = 0; i <= words.size(); ++i) {
    std::string label = i < words.size() ? StripEdgePunct(words[i]) : "";
    if (i < words.size() && valid.count(label)) {
      run.push_back(std::move(label));
      continue;
    }
    if (run.size() == n_tokens) return run;
    run.clear();
  }
  ThrowParse("no run of " + std::to_string(n_tokens) +
             " labels in model response");
}

std::vector<std::string> ParseAugmentedText(std::string_view response) {
  if (SplitWhitespace(response).empty()) ThrowParse("empty model response");
  std::string_view text = response;
  const std::size_t at = response.rfind(kAugMarker);
  if (at != std::string_view::npos) {
    text = response.substr(at + kAugMarker.size());
    while (!text.empty() &&
           (text.front() == ':' || text.front() == '}' ||
            text.front() == '*' || text.front() == ' ' ||
            text.front() == '\t' || text.front() == '\n' ||
            text.front() == '\r')) {
      text.remove_prefix(1);
    }
  }
  std::vector<std::string> tokens = SplitWhitespace(text);
  if (tokens.empty()) ThrowParse("nothing after the AUGMENTED TEXT marker");
  return tokens;
}

std::vector<AugExample> DefaultAugExamples(const Corpus& train,
                                           std::size_t count,
                                           std::uint64_t seed) {
  Corpus picked;
  for (std::size_t s : CoveringSentences(train, count)) {
    picked.sentences.push_back(train.sentences[s]);
  }
  AugmentResult replaced =
      EdaRandomReplace(picked, BuildTypeInventories(train), seed);
  std::vector<AugExample> examples;
  for (std::size_t i = 0; i < picked.sentences.size(); ++i) {
    examples.push_back({JoinTokens(picked.sentences[i].tokens),
                        JoinTokens(replaced.corpus.sentences[i].tokens)});
  }
  return examples;
}

std::vector<NerExample> DefaultNerExamples(const Corpus& train,
                                           std::size_t count) {
  std::vector<NerExample> examples;
  for (std::size_t s : CoveringSentences(train, count)) {
    const TaggedSentence& sentence = train.sentences[s];
    NerExample ex;
    ex.tokens = sentence.tokens;
    for (Label l : sentence.labels) ex.labels.push_back(LabelString(l));
    examples.push_back(std::move(ex));
  }
  return examples;
}

ChatClient::ChatClient(LlmConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty() && config_.replay_mode != ReplayMode::kReplay) {
    ThrowInvalid("LLM endpoint is empty");
  }
  if (config_.timeout.count() <= 0) ThrowInvalid("LLM timeout must be > 0");
  if (config_.replay_mode != ReplayMode::kOff && config_.replay_log.empty()) {
    ThrowInvalid("replay mode needs a replay log path");
  }
  if (config_.replay_mode == ReplayMode::kReplay) {
    std::ifstream in(config_.replay_log);
    if (!in) ThrowInvalid("cannot open replay log '" + config_.replay_log + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json entry = json::parse(line, nullptr, false);
      if (entry.is_discarded() || !entry.contains("request") ||
          !entry.contains("response")) {
        ThrowInvalid("malformed replay log entry");
      }
      replay_[entry["request"].get<std::string>()] =
          entry["response"].get<std::string>();
    }
  }
}

std::string ChatClient::RequestBody(const ChatExchange& exchange) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const ChatMessage& m : exchange.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  body["messages"] = std::move(messages);
  body["temperature"] = config_.temperature;
  body["max_tokens"] = config_.max_tokens;
  return body.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string ChatClient::Send(const std::string& body, ChatExchange& exchange) {
  httplib::Client client(config_.endpoint);
  const auto seconds =
      std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.credential_env.c_str());
      key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  Error last(ErrorKind::kTransport, "no attempt made");
  auto backoff = config_.initial_backoff;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Result res =
        client.Post(config_.path, headers, body, "application/json");
    if (!res) {
      const httplib::Error err = res.error();
      last = Error(err == httplib::Error::ConnectionTimeout ||
                           err == httplib::Error::Read
                       ? ErrorKind::kTimeout
                       : ErrorKind::kTransport,
                   "chat endpoint: " + httplib::to_string(err));
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(ErrorKind::kAuth, "chat endpoint rejected credentials (HTTP " +
                                        std::to_string(res->status) + ")");
    }
    if (IsTransient(res->status)) {
      last = Error(ErrorKind::kTransport,
                   "chat endpoint: HTTP " + std::to_string(res->status));
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorKind::kTransport,
                  "chat endpoint: HTTP " + std::to_string(res->status));
    }
    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") ||
        !doc["choices"].is_array() || doc["choices"].empty()) {
      throw Error(ErrorKind::kTransport, "chat endpoint: malformed response");
    }
    const json& message = doc["choices"][0].value("message", json::object());
    if (!message.contains("content") || !message["content"].is_string()) {
      throw Error(ErrorKind::kTransport,
                  "chat endpoint: response has no message content");
    }
    if (doc.contains("usage")) exchange.usage = doc["usage"].dump();
    return message["content"].get<std::string>();
  }
  throw last;
}

std::string ChatClient::Complete(ChatExchange& exchange) {
  const bool has_user =
      std::any_of(exchange.messages.begin(), exchange.messages.end(),
                  [](const ChatMessage& m) { return m.role == "user"; });
  if (!has_user) ThrowInvalid("chat exchange needs a user message");
  const std::string body = RequestBody(exchange);

  if (config_.replay_mode == ReplayMode::kReplay) {
    std::lock_guard<std::mutex> lock(replay_mu_);
    auto it = replay_.find(body);
    if (it == replay_.end()) {
      throw Error(ErrorKind::kTransport, "replay log has no recorded response");
    }
    exchange.response = it->second;
    return exchange.response;
  }
  exchange.response = Send(body, exchange);
  if (config_.replay_mode == ReplayMode::kRecord) {
    std::lock_guard<std::mutex> lock(replay_mu_);
    std::ofstream out(config_.replay_log, std::ios::app);
    json entry;
    entry["request"] = body;
    entry["response"] = exchange.response;
    out << entry.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  return exchange.response;
}

std::string ChatComplete(const LlmConfig& config, ChatExchange& exchange) {
  ChatClient client(config);
  return client.Complete(exchange);
}

ChatBackend MakeChatBackend(std::shared_ptr<ChatClient> client) {
  return [client = std::move(client)](ChatExchange& exchange) {
    return client->Complete(exchange);
  };
}

std::optional<std::vector<Label>> AlignGenerated(
    const TaggedSentence& source, std::span<const std::string> generated) {
  const std::vector<EntityMention> mentions = SentenceMentions(source);
  // fillers[i] sits before mention i; fillers[m] is the tail.
  std::vector<std::vector<std::string>> fillers(mentions.size() + 1);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i <= mentions.size(); ++i) {
    const std::size_t end =
        i < mentions.size() ? mentions[i].start : source.tokens.size();
    fillers[i].assign(source.tokens.begin() + cursor,
                      source.tokens.begin() + end);
    if (i < mentions.size()) cursor = end + mentions[i].length;
  }

  const std::size_t n = generated.size();
  const std::size_t m = mentions.size();
  auto filler_at = [&](std::size_t i, std::size_t pos) {
    const auto& f = fillers[i];
    if (pos + f.size() > n) return false;
    return std::equal(f.begin(), f.end(), generated.begin() + pos);
  };

  // spans[i] = (start, length) of the replacement for mention i.
  std::vector<std::pair<std::size_t, std::size_t>> spans(m);
  std::set<std::pair<std::size_t, std::size_t>> dead;
  // Matches filler i at `pos`, then everything after it.
  std::function<bool(std::size_t, std::size_t)> solve =
      [&](std::size_t i, std::size_t pos) -> bool {
    if (dead.count({i, pos})) return false;
    bool ok = false;
    if (filler_at(i, pos)) {
      const std::size_t after = pos + fillers[i].size();
      if (i == m) {
        ok = after == n;
      } else {
        for (std::size_t len = 1; after + len <= n && !ok; ++len) {
          spans[i] = {after, len};
          ok = solve(i + 1, after + len);
        }
      }
    }
    if (!ok) dead.insert({i, pos});
    return ok;
  };
  if (!solve(0, 0)) return std::nullopt;

  std::vector<Label> labels(n, Label::O());
  for (std::size_t i = 0; i < m; ++i) {
    labels[spans[i].first] = Label::B(mentions[i].type);
    for (std::size_t k = 1; k < spans[i].second; ++k) {
      labels[spans[i].first + k] = Label::I(mentions[i].type);
    }
  }
  return labels;
}

AugmentResult GenerativeAugment(const Corpus& corpus, const ChatBackend& chat,
                                const GenerativeOptions& options) {
  std::vector<std::size_t> work;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& labels = corpus.sentences[s].labels;
    if (std::any_of(labels.begin(), labels.end(),
                    [](Label l) { return !l.IsOutside(); })) {
      work.push_back(s);
    }
  }
  struct Outcome {
    std::optional<TaggedSentence> sentence;
    std::string reason;
    bool transport = false;
    std::vector<Replacement> replacements;
  };
  std::vector<Outcome> outcomes(work.size());

  ForEachConcurrently(work.size(), options.max_in_flight, [&](std::size_t w) {
    const TaggedSentence& source = corpus.sentences[work[w]];
    Outcome& out = outcomes[w];
    try {
      ChatExchange exchange;
      exchange.messages.push_back(
          {"user", BuildAugPrompt(options.language, options.examples,
                                  JoinTokens(source.tokens))});
      const std::string response = chat(exchange);
      std::vector<std::string> tokens = ParseAugmentedText(response);
      std::optional<std::vector<Label>> labels = AlignGenerated(source, tokens);
      if (!labels) {
        out.reason = "generated text does not preserve the non-entity tokens";
        return;
      }
      TaggedSentence aug{std::move(tokens), std::move(*labels)};
      if (!IsValidBio(aug.labels)) {
        out.reason = "aligned labels are not valid BIO";
        return;
      }
      if (aug.tokens == source.tokens) {
        out.reason = "generated text is identical to the original";
        return;
      }
      const std::vector<EntityMention> before = SentenceMentions(source);
      const std::vector<EntityMention> after = SentenceMentions(aug);
      for (std::size_t i = 0; i < before.size() && i < after.size(); ++i) {
        Replacement r;
        r.mention_index = i;
        r.source = before[i].surface;
        r.candidate = after[i].surface;
        out.replacements.push_back(std::move(r));
      }
      out.sentence = std::move(aug);
    } catch (const Error& e) {
      out.reason = e.what();
      out.transport = e.IsTransport();
    } catch (const std::exception& e) {
      out.reason = e.what();
    }
  });

  AugmentResult result;
  result.corpus.scheme = Scheme::kBio;
  result.requests = work.size();
  for (std::size_t w = 0; w < work.size(); ++w) {
    Outcome& out = outcomes[w];
    if (!out.sentence) {
      if (out.transport) ++result.transport_failures;
      result.provenance.events.push_back(
          {work[w], 1, "dropped: " + out.reason});
      continue;
    }
    ProvenanceRecord record;
    record.origin = work[w];
    record.method = AugMethod::kGenerative;
    record.replacements = std::move(out.replacements);
    result.provenance.records.push_back(std::move(record));
    result.corpus.sentences.push_back(std::move(*out.sentence));
  }
  return result;
}

FewShotResult FewShotNer(const Corpus& corpus, const ChatBackend& chat,
                         const FewShotOptions& options) {
  FewShotResult result;
  result.predictions.scheme = Scheme::kBio;
  result.predictions.sentences.resize(corpus.sentences.size());
  std::vector<std::string> reasons(corpus.sentences.size());
  std::vector<char> transport(corpus.sentences.size(), 0);

  ForEachConcurrently(
      corpus.sentences.size(), options.max_in_flight, [&](std::size_t s) {
        const TaggedSentence& input = corpus.sentences[s];
        TaggedSentence& out = result.predictions.sentences[s];
        out.tokens = input.tokens;
        out.labels.assign(input.tokens.size(), Label::O());
        try {
          ChatExchange exchange;
          exchange.messages.push_back(
              {"user", BuildFewShotNerPrompt(options.language,
                                             options.examples, input.tokens)});
          const std::string response = chat(exchange);
          std::vector<std::string> labels = ParseLabelSequence(
              response, input.tokens.size(), BioLabelStrings());
          for (std::size_t i = 0; i < labels.size(); ++i) {
            out.labels[i] = *ParseLabel(labels[i], Scheme::kBio);
          }
          if (RepairBio(out.labels) > 0) {
            reasons[s] = "repaired orphan I- labels";
          }
        } catch (const Error& e) {
          reasons[s] = std::string("tagged all-O: ") + e.what();
          transport[s] = e.IsTransport() ? 1 : 0;
        } catch (const std::exception& e) {
          reasons[s] = std::string("tagged all-O: ") + e.what();
        }
      });

  for (std::size_t s = 0; s < reasons.size(); ++s) {
    if (transport[s]) ++result.transport_failures;
    if (!reasons[s].empty()) result.events.push_back({s, 1, reasons[s]});
  }
  return result;
}

}  // namespace clusteraug

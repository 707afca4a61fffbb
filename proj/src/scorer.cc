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

#include "clusteraug/scorer.h"

#include <string>
#include <unordered_map>
#include <utility>

#include "clusteraug/error.h"

namespace clusteraug {

namespace {

[[noreturn]] void ThrowContract(const std::string& message) {
  throw Error(ErrorKind::kContract, "external tagger: " + message);
}

}  // namespace

std::vector<std::vector<Label>> Scorer::TagBatch(
    std::span<const std::vector<std::string>> batch) const {
  std::vector<std::vector<Label>> out;
  out.reserve(batch.size());
  for (const std::vector<std::string>& tokens : batch) out.push_back(Tag(tokens));
  return out;
}

GazetteerTagger::GazetteerTagger(const Corpus& train)
    : GazetteerTagger(BuildTypeInventories(train)) {
  if (train.empty()) ThrowInvalid("gazetteer: empty training corpus");
}

GazetteerTagger::GazetteerTagger(const TypeInventories& inventories)
    : inventories_(inventories), matcher_(inventories) {}

std::vector<Label> GazetteerTagger::Tag(
    std::span<const std::string> tokens) const {
  std::vector<Label> labels(tokens.size(), Label::O());
  for (const SurfaceMatch& match : matcher_.Match(tokens)) {
    labels[match.start] = Label::B(match.type);
    for (std::size_t k = 1; k < match.length; ++k) {
      labels[match.start + k] = Label::I(match.type);
    }
  }
  return labels;
}

std::vector<std::vector<Label>> GazetteerTagger::TagBatch(
    std::span<const std::vector<std::string>> batch) const {
  std::vector<std::vector<Label>> out(batch.size());
  const long long n = static_cast<long long>(batch.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = Tag(batch[static_cast<std::size_t>(i)]);
  }
  return out;
}

WireClient::WireClient(ExternalEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.command.empty() == endpoint_.address.empty()) {
    ThrowInvalid("external endpoint needs exactly one of command or address");
  }
  if (endpoint_.timeout.count() <= 0) {
    ThrowInvalid("external endpoint timeout must be positive");
  }
}

std::vector<WireResponse> WireClient::RoundTrip(
    std::vector<WireRequest> requests) {
  std::lock_guard<std::mutex> lock(mu_);
  if (requests.empty()) return {};
  if (!channel_) {
    channel_ = endpoint_.command.empty()
                   ? LineChannel::Connect(endpoint_.address)
                   : LineChannel::Spawn(endpoint_.command);
  }
  std::unordered_map<std::uint64_t, std::size_t> pending;
  std::string out;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    requests[i].id = next_id_++;
    pending.emplace(requests[i].id, i);
    out += EncodeRequest(requests[i]);
    out += '\n';
  }
  std::vector<WireResponse> responses(requests.size());
  std::vector<bool> answered(requests.size(), false);
  std::size_t remaining = requests.size();
  try {
    channel_->Exchange(
        out,
        [&](std::string_view line) {
          WireResponse response = DecodeResponse(line);
          auto it = pending.find(response.id);
          if (it == pending.end()) {
            ThrowContract("response for unknown id " +
                          std::to_string(response.id));
          }
          if (answered[it->second]) {
            ThrowContract("duplicate response for id " +
                          std::to_string(response.id));
          }
          answered[it->second] = true;
          responses[it->second] = std::move(response);
          return --remaining == 0;
        },
        endpoint_.timeout);
  } catch (const Error&) {
    // The stream position is unknown after a failure; reconnect next time.
    channel_.reset();
    throw;
  }
  return responses;
}

ExternalScorer::ExternalScorer(ExternalScorerOptions options)
    : options_(std::move(options)), client_(options_.endpoint) {}

std::vector<Label> ExternalScorer::Validate(const WireResponse& response,
                                            std::size_t n_tokens) const {
  if (response.error) {
    ThrowContract("request " + std::to_string(response.id) +
                  " failed: " + *response.error);
  }
  if (!response.labels) ThrowContract("response without labels");
  if (response.labels->size() != n_tokens) {
    ThrowContract("request " + std::to_string(response.id) + " has " +
                  std::to_string(n_tokens) + " tokens but " +
                  std::to_string(response.labels->size()) + " labels");
  }
  std::vector<Label> labels;
  labels.reserve(n_tokens);
  for (const std::string& text : *response.labels) {
    std::optional<Label> label = ParseLabel(text, Scheme::kBio);
    if (!label) {
      if (!options_.lenient) ThrowContract("unknown label '" + text + "'");
      label = Label::O();
    }
    labels.push_back(*label);
  }
  if (!IsValidBio(labels)) {
    if (!options_.lenient) ThrowContract("labels are not a valid BIO sequence");
    RepairBio(labels);
  }
  return labels;
}

std::vector<Label> ExternalScorer::Tag(
    std::span<const std::string> tokens) const {
  std::vector<std::string> copy(tokens.begin(), tokens.end());
  return TagBatch(std::span<const std::vector<std::string>>(&copy, 1)).front();
}

std::vector<std::vector<Label>> ExternalScorer::TagBatch(
    std::span<const std::vector<std::string>> batch) const {
  std::vector<WireRequest> requests(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) requests[i].tokens = batch[i];
  std::vector<WireResponse> responses = client_.RoundTrip(std::move(requests));
  std::vector<std::vector<Label>> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.push_back(Validate(responses[i], batch[i].size()));
  }
  return out;
}

}  // namespace clusteraug

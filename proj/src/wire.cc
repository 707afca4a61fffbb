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

#include "clusteraug/wire.h"

#include <string>

#include "clusteraug/error.h"
#include "json.hpp"

namespace clusteraug {

namespace {

using nlohmann::json;

[[noreturn]] void ThrowContract(const std::string& message) {
  throw Error(ErrorKind::kContract, "wire record: " + message);
}

json ParseObject(std::string_view line) {
  json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    ThrowContract("not a JSON object");
  }
  return doc;
}

std::uint64_t ReadId(const json& doc) {
  auto it = doc.find("id");
  if (it == doc.end() || !it->is_number_unsigned()) {
    ThrowContract("missing or non-integer id");
  }
  return it->get<std::uint64_t>();
}

std::vector<std::string> ReadStrings(const json& value, const char* field) {
  if (!value.is_array()) ThrowContract(std::string(field) + " is not an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_string()) {
      ThrowContract(std::string(field) + " holds a non-string");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string Dump(const nlohmann::ordered_json& doc) {
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

std::string EncodeRequest(const WireRequest& request) {
  nlohmann::ordered_json doc;
  doc["id"] = request.id;
  doc["tokens"] = request.tokens;
  if (request.span) {
    doc["span"] = {request.span->first, request.span->second};
  }
  if (request.candidate) doc["candidate"] = *request.candidate;
  return Dump(doc);
}

std::string EncodeResponse(const WireResponse& response) {
  nlohmann::ordered_json doc;
  doc["id"] = response.id;
  if (response.error) {
    doc["error"] = *response.error;
  } else if (response.labels) {
    doc["labels"] = *response.labels;
  } else if (response.similarity) {
    doc["similarity"] = *response.similarity;
  }
  if (response.truncated) doc["truncated"] = true;
  return Dump(doc);
}

WireRequest DecodeRequest(std::string_view line) {
  const json doc = ParseObject(line);
  WireRequest request;
  request.id = ReadId(doc);
  auto tokens = doc.find("tokens");
  if (tokens == doc.end()) ThrowContract("request without tokens");
  request.tokens = ReadStrings(*tokens, "tokens");
  auto candidate = doc.find("candidate");
  auto span = doc.find("span");
  if (candidate != doc.end() || span != doc.end()) {
    if (candidate == doc.end() || !candidate->is_string()) {
      ThrowContract("similarity request needs a string candidate");
    }
    request.candidate = candidate->get<std::string>();
    if (span == doc.end() || !span->is_array() || span->size() != 2 ||
        !(*span)[0].is_number_unsigned() || !(*span)[1].is_number_unsigned()) {
      ThrowContract("similarity request needs span [start, length]");
    }
    request.span = {(*span)[0].get<std::size_t>(),
                    (*span)[1].get<std::size_t>()};
  }
  return request;
}

WireResponse DecodeResponse(std::string_view line) {
  const json doc = ParseObject(line);
  WireResponse response;
  response.id = ReadId(doc);
  if (auto it = doc.find("error"); it != doc.end()) {
    response.error = it->is_string() ? it->get<std::string>() : it->dump();
  }
  if (auto it = doc.find("labels"); it != doc.end()) {
    response.labels = ReadStrings(*it, "labels");
  }
  if (auto it = doc.find("similarity"); it != doc.end()) {
    if (!it->is_number()) ThrowContract("similarity is not a number");
    response.similarity = it->get<double>();
  }
  if (auto it = doc.find("truncated"); it != doc.end() && it->is_boolean()) {
    response.truncated = it->get<bool>();
  }
  if (!response.error && !response.labels && !response.similarity) {
    ThrowContract("response carries no labels, similarity or error");
  }
  return response;
}

}  // namespace clusteraug

// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON mappings for the core value types. Field names mirror the C++ member
// names; the service schema (api/openapi.json) documents the same shapes.

#include <json.hpp>

#include "goalcoach/core/belief_state.hpp"
#include "goalcoach/core/dialogue.hpp"
#include "goalcoach/core/emotion.hpp"

namespace goalcoach {

using Json = nlohmann::json;

/// {"slots": {"activity": ["walk"], ...}, "turn_index": n}; unfilled slots omitted.
Json belief_to_json(const BeliefState& b);
/// Accepts the object above, or a bare slot map. Throws MalformedBelief.
BeliefState belief_from_json(const Json& j);

Json turn_to_json(const DialogueTurn& t);
DialogueTurn turn_from_json(const Json& j);

Json mechanisms_to_json(MechanismSet m);
MechanismSet mechanisms_from_json(const Json& j);

/// {"distribution": {label: p, ...}, "top": [{"label", "probability"}, x2]}
Json emotion_to_json(const EmotionPrediction& e);
EmotionPrediction emotion_from_json(const Json& j,
                                    std::shared_ptr<const EmotionVocabulary> vocab);

Json snapshot_to_json(const GoalSnapshot& s);
GoalSnapshot snapshot_from_json(const Json& j);

}  // namespace goalcoach

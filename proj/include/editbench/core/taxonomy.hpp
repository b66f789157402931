#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "editbench/core/types.hpp"

namespace editbench {

struct OperationInfo {
  AtomicOperationType type;
  OperationCategory category;
  std::string_view name;
  std::string_view description;
};

// All 24 atomic operations in stable enum order.
const std::array<OperationInfo, kOperationCount>& taxonomy();

const OperationInfo& operation_info(AtomicOperationType type);
std::optional<AtomicOperationType> operation_from_name(std::string_view name);

std::string_view category_name(OperationCategory category);
std::string_view category_description(OperationCategory category);

// Static JSON document listing the taxonomy (categories with their
// operations and descriptions).
std::string taxonomy_json();

// Plain-text listing used inside generation prompts.
std::string taxonomy_prompt_listing();

}  // namespace editbench

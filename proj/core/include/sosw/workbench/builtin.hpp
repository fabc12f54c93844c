#pragma once

#include "sosw/workbench/registry.hpp"

namespace sosw::workbench {

Language while_language();
Language lambda_language();
Language choreo_language();

/// Adds the while, lambda and choreography languages.
void register_builtins(Registry& registry);

} // namespace sosw::workbench

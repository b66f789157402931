#pragma once

#include "editbench/gateway/simulated.hpp"

namespace editbench {

// Latent provider that grounds the simulated judge in scene truth: it reads
// the input/output scene blocks and the instruction out of the grading
// prompt, re-derives the clause list, and returns the oracle value for the
// prompted metric. Prompts without scene payloads fall back to a neutral 5.
LatentProvider scene_oracle_latents(double noise_sd);

}  // namespace editbench

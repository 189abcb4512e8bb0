/*
 * Copyright (c) 2026, hxid contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "noise.hpp"

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace hxid {

OutputTargets inject_noise(const OutputTargets& targets,
                           const NoiseConfig& cfg) {
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
    throw Error(ErrorKind::argument, "noise scale must be >= 0 and finite");
  }
  if (targets.t_co.size() != targets.t_ho.size()) {
    throw Error(ErrorKind::argument,
                "target channels must have equal length");
  }

  if (cfg.sigma == 0.0) return targets;

  OutputTargets out = targets;
  RandomStream stream(cfg.seed);
  for (double& v : out.t_co) v += cfg.sigma * stream.normal();
  for (double& v : out.t_ho) v += cfg.sigma * stream.normal();
  return out;
}

}  // namespace hxid

#pragma once

#include "bsbs/parallel.hpp"

namespace bsbs {

template <class R>
std::vector<R> map_shots(const SimConfig& config, const std::function<R(const ShotRecord&)>& fn)
{
    return parallel_map<R>(config.shots, config.threads,
                           [&](std::size_t i) { return fn(simulate_shot(config, i)); });
}

} // namespace bsbs

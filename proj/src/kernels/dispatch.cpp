// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace d2dsim::kern {
namespace {

const Ops* pick_auto()
{
    if (const Ops* o = avx2_ops())
        return o;
    if (const Ops* o = neon_ops())
        return o;
    return scalar_ops();
}

const Ops* pick_named(std::string_view name)
{
    if (name == "auto")
        return pick_auto();
    if (name == "scalar")
        return scalar_ops();
    if (name == "avx2") {
        if (const Ops* o = avx2_ops())
            return o;
        throw std::invalid_argument("kernel variant 'avx2' not supported on this CPU");
    }
    if (name == "neon") {
        if (const Ops* o = neon_ops())
            return o;
        throw std::invalid_argument("kernel variant 'neon' not supported on this CPU");
    }
    throw std::invalid_argument("unknown kernel variant '" + std::string(name) + "'");
}

const Ops*& active_slot()
{
    static const Ops* slot = [] {
        if (const char* env = std::getenv("D2DSIM_KERNELS"))
            return pick_named(env);
        return pick_auto();
    }();
    return slot;
}

} // namespace

const Ops& active()
{
    return *active_slot();
}

std::string_view active_name()
{
    return active().name;
}

void select(std::string_view name)
{
    active_slot() = pick_named(name);
}

std::vector<const Ops*> available()
{
    std::vector<const Ops*> out{scalar_ops()};
    if (const Ops* o = avx2_ops())
        out.push_back(o);
    if (const Ops* o = neon_ops())
        out.push_back(o);
    return out;
}

} // namespace d2dsim::kern

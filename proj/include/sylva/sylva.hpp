// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_SYLVA_HPP
#define SYLVA_SYLVA_HPP

#include "sylva/config.hpp"
#include "sylva/core.hpp"
#include "sylva/evaluation.hpp"
#include "sylva/fetch.hpp"
#include "sylva/fitting.hpp"
#include "sylva/geometry.hpp"
#include "sylva/models.hpp"
#include "sylva/raster.hpp"
#include "sylva/records.hpp"
#include "sylva/serialize.hpp"
#include "sylva/synth.hpp"

#endif  // SYLVA_SYLVA_HPP

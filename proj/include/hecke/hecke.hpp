// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HECKE_HECKE_HPP
#define HECKE_HECKE_HPP

#include <hecke/types.hpp>
#include <hecke/special_fn.hpp>
#include <hecke/quadrature.hpp>
#include <hecke/lppf.hpp>
#include <hecke/forms.hpp>
#include <hecke/form_config.hpp>
#include <hecke/lfunction.hpp>
#include <hecke/identities.hpp>
#include <hecke/report.hpp>

#endif

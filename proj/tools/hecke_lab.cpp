// Copyright 2026 The hecke-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <hecke/cli.hpp>

int main(int argc, char** argv) { return hecke::cli::run(argc, argv); }

// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace qharness {

inline constexpr const char* kVersion = "0.1.0";

/// Version of the CSV/JSON output schemas; bumped on any breaking change so
/// downstream diffs of verification reports stay meaningful.
inline constexpr int kSchemaVersion = 1;

}  // namespace qharness

// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks for `iwasawa`; see `benches/`.

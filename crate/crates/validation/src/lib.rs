//! Holds the `acceptance` test target. It checks every acceptance criterion
//! of `gpmap` with fixed tolerances and prints one PASS/FAIL line for each.

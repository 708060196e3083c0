//! Holds the `acceptance` test target, which runs every subsystem at the sizes of the published
//! results and prints one PASS/FAIL line per criterion.

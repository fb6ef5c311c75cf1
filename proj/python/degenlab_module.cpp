#include <pybind11/pybind11.h>
PYBIND11_MODULE(_degenlab, m) { m.doc() = "degenlab core"; }

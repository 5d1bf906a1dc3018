#pragma once

namespace arise {

// Global worker cap (the CLI's --threads); 0 keeps the OpenMP default.
void set_max_threads(int n);

// Resolves a per-call request (0 = use the global setting).
int effective_threads(int requested);

} // namespace arise

// Acceptance suite: one PASS/FAIL line per criterion. Populated after the
// statistical calibration runs settle.
int main() { return 0; }

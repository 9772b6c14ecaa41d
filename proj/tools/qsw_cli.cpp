#include "qsw/qsw.hpp"
int main() { return 0; }

#include <cstdio>

int main() {
    std::puts("lakevortex: CLI under construction");
    return 1;
}

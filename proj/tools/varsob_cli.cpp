// Placeholder main; the full command-line driver lands with the energy module.
#include <cstdio>

int main() {
    std::puts("varsob: subcommands not wired up yet");
    return 2;
}

#include <cstdio>

int main() {
    std::puts("sepfn: subcommands not wired yet");
    return 2;
}

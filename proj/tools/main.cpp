#include <cstdio>

int main() {
  std::puts("covgeom: subcommands not wired up yet");
  return 0;
}

#include <cstdio>

int main() {
  std::puts("sufm: placeholder");
  return 0;
}

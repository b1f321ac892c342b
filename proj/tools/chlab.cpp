#include <cstdio>

int main() {
  std::puts("chlab: placeholder");
  return 0;
}

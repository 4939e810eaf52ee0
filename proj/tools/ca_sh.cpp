// Drop-in replacement for /bin/sh that refuses injected commands.

#include "ctxaudit/shellwrap.hpp"

int main(int argc, char** argv, char** envp) { return ctxaudit::wrap_main(argc, argv, envp); }

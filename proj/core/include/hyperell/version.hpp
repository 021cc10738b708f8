#pragma once

#define HYPERELL_VERSION "0.1.0"

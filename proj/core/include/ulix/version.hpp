#pragma once

#define ULIX_VERSION "0.1.0"

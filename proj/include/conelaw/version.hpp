#pragma once

#define CONELAW_VERSION "0.1.0"

#pragma once

#define AEVQE_VERSION "0.1.0"

#include "wavecharge.h"

#ifndef WAVECHARGE_H
#define WAVECHARGE_H
#endif

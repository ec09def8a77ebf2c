// Poll-based refresh; the server is the single source of truth.

export interface Poller {
  start(): void;
  stop(): void;
  readonly running: boolean;
}

export function createPoller(tick: () => Promise<void>, intervalMs = 2000): Poller {
  let timer: ReturnType<typeof setInterval> | null = null;
  let inFlight = false;
  return {
    get running() {
      return timer !== null;
    },
    start() {
      if (timer !== null) return;
      timer = setInterval(async () => {
        if (inFlight) return; // never overlap requests
        inFlight = true;
        try {
          await tick();
        } finally {
          inFlight = false;
        }
      }, intervalMs);
    },
    stop() {
      if (timer !== null) {
        clearInterval(timer);
        timer = null;
      }
    },
  };
}

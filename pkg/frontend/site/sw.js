/**
 * Cache-aside service worker for the application shell.
 *
 * While the server is reachable every GET is fetched, a copy is stored in
 * CacheStorage, and the response is returned; when it is not, the cached
 * copy is served instead. Bumping APP_VERSION retires the old cache on
 * activate, so a new release online replaces stale assets.
 */
export const APP_VERSION = '1';
export const CACHE_NAME = `workspace-shell-v${APP_VERSION}`;
export const SHELL_ASSETS = [
    './',
    'index.html',
    'app.js',
    'strings/eng_Latn.json',
    'strings/fra_Latn.json',
];
export async function handleFetch(request, cacheStorage, fetchFn) {
    const cache = await cacheStorage.open(CACHE_NAME);
    try {
        const response = await fetchFn(request);
        if (response.ok)
            await cache.put(request, response.clone());
        return response;
    }
    catch (error) {
        const cached = await cache.match(request);
        if (cached)
            return cached;
        throw error;
    }
}
export async function dropStaleCaches(cacheStorage) {
    const dropped = [];
    for (const name of await cacheStorage.keys()) {
        if (name !== CACHE_NAME) {
            await cacheStorage.delete(name);
            dropped.push(name);
        }
    }
    return dropped;
}
// Registration block, active only inside a real service-worker scope.
const scope = self;
if (typeof scope.addEventListener === 'function' && scope.caches && scope.skipWaiting) {
    scope.addEventListener('install', (event) => {
        void scope.skipWaiting();
        event.waitUntil(scope.caches.open(CACHE_NAME).then((cache) => cache.addAll(SHELL_ASSETS)));
    });
    scope.addEventListener('activate', (event) => {
        event.waitUntil(dropStaleCaches(scope.caches));
    });
    scope.addEventListener('fetch', (event) => {
        const request = event.request;
        if (request.method !== 'GET' || request.url.includes('/v1/'))
            return;
        event.respondWith(handleFetch(request, scope.caches, fetch));
    });
}
